use thiserror::Error;

/// Typed failures across the library. Integration guards, reduction
/// singularities and solver breakdowns all surface through this enum so
/// callers can tell a physical boundary from a numerical one.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MpError {
    #[error("r = {r} is at or inside the horizon domain guard")]
    HorizonDomain { r: f64 },
    #[error("velocity denominator 2m^2 - d ~ 0 (|2m^2-d| = {value:.3e})")]
    SingularV { value: f64 },
    #[error("reduction singularity: Z2^2 - E1^2 = {value:.3e} <= 0")]
    SingularE1Z2 { value: f64 },
    #[error("V0 = 0 on the Q = 0 branch")]
    SingularV0,
    #[error("velocity is not time-like (U = {u:.6e} >= 0)")]
    SpacelikeVelocity { u: f64 },
    #[error("reduction singularity: L2 = L3 = 0")]
    ReductionSingularity,
    #[error("polar axis: sin(theta) = 0")]
    PolarAxis,
    #[error("|E1| > |P_phi|: no real theta")]
    InvalidTheta,
    #[error("step size underflow (h = {h:.3e})")]
    StepUnderflow { h: f64 },
    #[error("section crossing is tangential (|dE1/dtau| = {rate:.3e})")]
    DegenerateCrossing { rate: f64 },
    #[error("outside the domain of definition: {what}")]
    OutsideDomain { what: String },
    #[error("no cusp exists for this spin/sign")]
    NoCusp,
    #[error("continuation failed at r = {r}")]
    ContinuationFailed { r: f64 },
    #[error("point is not an equilibrium (|rhs| = {residual:.3e})")]
    NotAnEquilibrium { residual: f64 },
    #[error("degenerate spectrum: |B| and |A^2-4B| both below threshold")]
    DegenerateSpectrum,
    #[error("Newton did not converge after {iters} iterations")]
    NoConvergence { iters: usize },
    #[error("bisection bracket failed: {what}")]
    BracketFailed { what: String },
    #[error("manifold growth terminated: {what}")]
    ManifoldTerminated { what: String },
}

pub type Result<T> = std::result::Result<T, MpError>;
