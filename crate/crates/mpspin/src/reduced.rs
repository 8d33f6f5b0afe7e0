//! The reduced 3-degree-of-freedom system in (E, Z, r, P_r). The
//! Hamiltonian is evaluated generically over either f64 or dual numbers,
//! so the bracket equations use exact gradients. The mass-shell
//! substitution (m^2 expressed through the state) is baked into the
//! evaluator before differentiation, as the reduction requires.

use crate::dual::{Dual9, Real};
use crate::error::{MpError, Result};
use crate::full_system::{self, FullState};
use crate::geometry::SpacetimePoint;

pub const V_GUARD: f64 = 1e-9;
pub const E1Z2_GUARD: f64 = 1e-12;
pub const HORIZON_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub e: [f64; 3],
    pub z: [f64; 3],
    pub r: f64,
    pub pr: f64,
}

impl ReducedState {
    pub fn new(e: [f64; 3], z: [f64; 3], r: f64, pr: f64) -> Self {
        ReducedState { e, z, r, pr }
    }

    pub fn to_vector(&self) -> [f64; 8] {
        [
            self.e[0], self.e[1], self.e[2], self.z[0], self.z[1], self.z[2], self.r, self.pr,
        ]
    }

    pub fn from_vector(v: &[f64; 8]) -> Self {
        ReducedState {
            e: [v[0], v[1], v[2]],
            z: [v[3], v[4], v[5]],
            r: v[6],
            pr: v[7],
        }
    }

    /// The discrete symmetry E1 -> -E1, E3 -> -E3 (a pi-rotation in the
    /// E-space); maps trajectories to trajectories.
    pub fn radial_symmetry(&self) -> Self {
        ReducedState {
            e: [-self.e[0], self.e[1], -self.e[2]],
            z: self.z,
            r: self.r,
            pr: self.pr,
        }
    }
}

/// Parameters fixed on a leaf of the reduction: masses, spin length c,
/// the F-integral value ell, the energy, and P_phi for reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralParams {
    pub m: f64,
    pub mu: f64,
    pub c: f64,
    pub ell: f64,
    pub energy: f64,
    pub pphi: f64,
}

impl IntegralParams {
    /// Scaled units m = mu = 1 with P_phi = sqrt(ell).
    pub fn scaled(c: f64, ell: f64, energy: f64) -> Self {
        IntegralParams {
            m: 1.0,
            mu: 1.0,
            c,
            ell,
            energy,
            pphi: ell.sqrt(),
        }
    }
}

/// Casimir of the Z-bracket: C_circ = -Z1^2 + Z2^2 - Z3^2.
pub fn casimir_circ(z: &[f64; 3]) -> f64 {
    -z[0] * z[0] + z[1] * z[1] - z[2] * z[2]
}

/// Casimir of the E-bracket: F = (E, E).
pub fn f_integral(e: &[f64; 3]) -> f64 {
    e[0] * e[0] + e[1] * e[1] + e[2] * e[2]
}

/// Effective squared mass: the mass-shell relation solved for m^2 in terms
/// of the state (the substitution performed inside V before gradients).
fn m2_eff_gen<T: Real>(e: &[T; 3], z: &[T; 3], r: T, pr: T, ee: T, mu: f64) -> T {
    let one = T::lift(1.0);
    let tmu = T::lift(mu);
    let two_mu = T::lift(2.0 * mu);
    let a = one - two_mu / r;
    let s_cap = z[1] * z[1] - e[0] * e[0];
    let sq = s_cap.sqrt();
    let theta = z[0] / z[1] * sq;
    let gamma = (a * s_cap).sqrt() - e[1];
    let r2 = r * r;
    let r3 = r2 * r;
    let w = tmu * theta - ee * r2;
    -a * pr * pr + w * w / (r3 * (r - two_mu)) - (e[2] * e[2] + gamma * gamma) / r2
}

/// Reduced Hamiltonian, effective form (mass shell substituted inside V).
fn ham_gen<T: Real>(e: &[T; 3], z: &[T; 3], r: T, pr: T, ee: T, m: f64, mu: f64) -> T {
    let one = T::lift(1.0);
    let half = T::lift(0.5);
    let tmu = T::lift(mu);
    let two_mu = T::lift(2.0 * mu);
    let inv_m = T::lift(1.0 / m);
    let a = one - two_mu / r;
    let s_cap = z[1] * z[1] - e[0] * e[0];
    let sq = s_cap.sqrt();
    let theta = z[0] / z[1] * sq;
    let gamma = (a * s_cap).sqrt() - e[1];
    let (e1, e2, e3) = (e[0], e[1], e[2]);
    let (z1, z2, z3) = (z[0], z[1], z[2]);
    let r2 = r * r;
    let r3 = r2 * r;
    let m2v = m2_eff_gen(e, z, r, pr, ee, mu);
    let v = m2v / tmu * r3 - T::lift(2.0) * z1 * z1 - z2 * z2 + z3 * z3
        + T::lift(3.0) * e1 * e1 * (one + z1 * z1 / (z2 * z2));
    let w = tmu * theta - r2 * ee;

    let t1 = a * inv_m * (half + (T::lift(2.0) * theta * theta + z2 * z2 - e1 * e1) / v) * pr * pr;
    let t2 = (gamma + e2) * inv_m / (r * v)
        * (e1 * e3 * (z1 * z1 / (z2 * z2) - one) - z3 * e2 * z1 / z2)
        * pr;
    let t3 = (z2 * z2 - e1 * e1) * inv_m / (r3 * v) * (r * gamma * gamma + tmu * z1 * z1);
    let t4 = -(w * w) * inv_m / (r3 * (r - two_mu))
        * (half - (z1 * z1 + z3 * z3 - T::lift(3.0) * theta * theta) / v);
    let t5 = sq * inv_m / (r * v) * (z3 * (theta - T::lift(2.0) * r * ee) * pr - z1 * z2 * ee);
    let t6 = (e3 * e3 + gamma * gamma) * inv_m / r2 * (half - T::lift(2.0) * e1 * e1 / v);
    let t7 = -w * inv_m / (r2 * v * (r * (r - two_mu)).sqrt()) * (e1 * e3 * z3 + z1 * z2 * e2);
    let q8 = z1 / z2 * e1 * e3 + z3 * gamma;
    let t8 = -inv_m / (r2 * v) * q8 * q8;
    t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8
}

/// Domain guards shared by every evaluator. Returns the f64 value of V.
fn guard_domain(state: &ReducedState, ee: f64, mu: f64) -> Result<f64> {
    if state.r - 2.0 * mu < HORIZON_GUARD {
        return Err(MpError::HorizonDomain { r: state.r });
    }
    let s_cap = state.z[1] * state.z[1] - state.e[0] * state.e[0];
    if s_cap < E1Z2_GUARD {
        return Err(MpError::SingularE1Z2 { value: s_cap });
    }
    let m2v = m2_eff_gen(&state.e, &state.z, state.r, state.pr, ee, mu);
    let (z1, z2, z3) = (state.z[0], state.z[1], state.z[2]);
    let e1 = state.e[0];
    let r3 = state.r * state.r * state.r;
    let v = m2v / mu * r3 - 2.0 * z1 * z1 - z2 * z2
        + z3 * z3
        + 3.0 * e1 * e1 * (1.0 + z1 * z1 / (z2 * z2));
    if v.abs() < V_GUARD {
        return Err(MpError::SingularV { value: v });
    }
    Ok(v)
}

/// Effective squared mass as a plain value (with domain guards).
pub fn m2_eff(state: &ReducedState, ee: f64, mu: f64) -> Result<f64> {
    if state.r - 2.0 * mu < HORIZON_GUARD {
        return Err(MpError::HorizonDomain { r: state.r });
    }
    let s_cap = state.z[1] * state.z[1] - state.e[0] * state.e[0];
    if s_cap < E1Z2_GUARD {
        return Err(MpError::SingularE1Z2 { value: s_cap });
    }
    Ok(m2_eff_gen(
        &state.e, &state.z, state.r, state.pr, ee, mu,
    ))
}

pub fn hamiltonian_reduced(state: &ReducedState, params: &IntegralParams) -> Result<f64> {
    guard_domain(state, params.energy, params.mu)?;
    Ok(ham_gen(
        &state.e,
        &state.z,
        state.r,
        state.pr,
        params.energy,
        params.m,
        params.mu,
    ))
}

/// Value and all nine partial derivatives of the reduced Hamiltonian
/// (state coordinates plus the energy parameter).
#[derive(Debug, Clone, Copy)]
pub struct HamGrad {
    pub value: f64,
    pub g_e: [f64; 3],
    pub g_z: [f64; 3],
    pub g_r: f64,
    pub g_pr: f64,
    pub g_ee: f64,
}

pub fn ham_gradient(state: &ReducedState, params: &IntegralParams) -> Result<HamGrad> {
    guard_domain(state, params.energy, params.mu)?;
    let e = [
        Dual9::var(state.e[0], 0),
        Dual9::var(state.e[1], 1),
        Dual9::var(state.e[2], 2),
    ];
    let z = [
        Dual9::var(state.z[0], 3),
        Dual9::var(state.z[1], 4),
        Dual9::var(state.z[2], 5),
    ];
    let r = Dual9::var(state.r, 6);
    let pr = Dual9::var(state.pr, 7);
    let ee = Dual9::var(params.energy, 8);
    let h = ham_gen(&e, &z, r, pr, ee, params.m, params.mu);
    Ok(HamGrad {
        value: h.v,
        g_e: [h.d[0], h.d[1], h.d[2]],
        g_z: [h.d[3], h.d[4], h.d[5]],
        g_r: h.d[6],
        g_pr: h.d[7],
        g_ee: h.d[8],
    })
}

#[derive(Debug, Clone, Copy)]
pub struct ReducedRhs {
    pub de: [f64; 3],
    pub dz: [f64; 3],
    pub dr: f64,
    pub dpr: f64,
}

impl ReducedRhs {
    pub fn to_vector(&self) -> [f64; 8] {
        [
            self.de[0], self.de[1], self.de[2], self.dz[0], self.dz[1], self.dz[2], self.dr,
            self.dpr,
        ]
    }
}

/// Bracket equations of motion on the leaf. The E-block is the rigid-body
/// bracket of F, the Z-block the semidirect one of C_circ; r and P_r are
/// canonical.
pub fn reduced_rhs(state: &ReducedState, params: &IntegralParams) -> Result<ReducedRhs> {
    let g = ham_gradient(state, params)?;
    Ok(bracket_rhs(state, &g))
}

/// The bracket contraction itself, reused by callers that already have the
/// gradient in hand.
pub fn bracket_rhs(state: &ReducedState, g: &HamGrad) -> ReducedRhs {
    let e = &state.e;
    let z = &state.z;
    let ge = &g.g_e;
    let gz = &g.g_z;
    let de = [
        ge[1] * e[2] - ge[2] * e[1],
        ge[2] * e[0] - ge[0] * e[2],
        ge[0] * e[1] - ge[1] * e[0],
    ];
    let dz = [
        z[2] * gz[1] + z[1] * gz[2],
        -z[2] * gz[0] + z[0] * gz[2],
        -z[1] * gz[0] - z[0] * gz[1],
    ];
    ReducedRhs {
        de,
        dz,
        dr: g.g_pr,
        dpr: -g.g_r,
    }
}

/// The two Tulczyjew relations carried into the reduced variables; both
/// vanish on the invariant manifold holding the physical trajectories.
pub fn tulczyjew_residuals(state: &ReducedState, params: &IntegralParams) -> Result<(f64, f64)> {
    let mu = params.mu;
    let ee = params.energy;
    let (e1, e2, e3) = (state.e[0], state.e[1], state.e[2]);
    let (z1, z2, z3) = (state.z[0], state.z[1], state.z[2]);
    let r = state.r;
    if r - 2.0 * mu <= 0.0 {
        return Err(MpError::HorizonDomain { r });
    }
    let s_cap = z2 * z2 - e1 * e1;
    if s_cap < 0.0 {
        return Err(MpError::SingularE1Z2 { value: s_cap });
    }
    let a = 1.0 - 2.0 * mu / r;
    let sq = s_cap.sqrt();
    let theta = z1 / z2 * sq;
    let gamma = (a * s_cap).sqrt() - e2;
    let fr = -theta * state.pr - sq * z3 / r
        + (e2 * z2 * z3 - e1 * z1 * e3) / (z2 * (r * (r - 2.0 * mu)).sqrt());
    let fth = ee * theta - mu * theta * theta / (r * r) + (gamma + e2) * gamma / r;
    Ok((fr, fth))
}

/// Time-likeness indicator of the reconstructed velocity, expressed
/// through gradients of the reduced Hamiltonian; the model requires U < 0.
pub fn timelike_indicator(state: &ReducedState, params: &IntegralParams) -> Result<f64> {
    let g = ham_gradient(state, params)?;
    let a = 1.0 - 2.0 * params.mu / state.r;
    let r2 = state.r * state.r;
    Ok(g.g_pr * g.g_pr / a + r2 * (g.g_e[1] * g.g_e[1] + g.g_e[2] * g.g_e[2])
        - a * g.g_ee * g.g_ee)
}

/// Reduction map from the full tetrad-variable state.
pub fn reduce(full: &FullState, mu: f64) -> Result<(ReducedState, IntegralParams)> {
    let th = full.point.theta;
    let (s, c) = th.sin_cos();
    if s == 0.0 {
        return Err(MpError::PolarAxis);
    }
    let l = &full.L;
    let m3 = &full.M;
    let l23 = (l[1] * l[1] + l[2] * l[2]).sqrt();
    if l23 < 1e-14 {
        return Err(MpError::ReductionSingularity);
    }
    let lnorm = (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]).sqrt();
    let pth = full.P[2];
    let pph = full.P[3];
    let w = (l[0] * c - pph) / s;
    let e = [
        l[0],
        (l[2] * pth + l[1] * w) / l23,
        (-l[1] * pth + l[2] * w) / l23,
    ];
    let z = [
        -m3[0] * lnorm / l23,
        lnorm,
        (m3[1] * l[2] - m3[2] * l[1]) / l23,
    ];
    let state = ReducedState::new(e, z, full.point.r, full.P[1]);
    let (_, ccirc) = full.casimirs();
    if ccirc <= 0.0 {
        return Err(MpError::OutsideDomain {
            what: format!("C_circ = {ccirc:.3e} <= 0: spin is not space-like"),
        });
    }
    let params = IntegralParams {
        m: full_system::mass(full, mu)?,
        mu,
        c: ccirc.sqrt(),
        ell: f_integral(&e),
        energy: -full.P[0],
        pphi: pph,
    };
    Ok((state, params))
}

/// Lift a reduced state to the representative configuration P_theta = 0,
/// cos(theta) = E1/P_phi, t = phi = 0. pphi_sign picks the sign of
/// P_phi = +-sqrt(F).
pub fn reconstruct_full(
    state: &ReducedState,
    params: &IntegralParams,
    pphi_sign: f64,
) -> Result<FullState> {
    let e = &state.e;
    let z = &state.z;
    let f = f_integral(e);
    if f <= 0.0 {
        return Err(MpError::ReductionSingularity);
    }
    let pphi = pphi_sign * f.sqrt();
    let costh = e[0] / pphi;
    if costh.abs() > 1.0 {
        return Err(MpError::InvalidTheta);
    }
    let l23sq = z[1] * z[1] - e[0] * e[0];
    if l23sq <= 0.0 {
        return Err(MpError::SingularE1Z2 { value: l23sq });
    }
    let l23 = l23sq.sqrt();
    let kap2 = f - e[0] * e[0];
    if kap2 <= 0.0 {
        return Err(MpError::ReductionSingularity);
    }
    let kap = kap2.sqrt();
    let theta = costh.acos();
    let ll = [
        e[0],
        -pphi_sign * l23 * e[1] / kap,
        -pphi_sign * l23 * e[2] / kap,
    ];
    let big_theta = z[0] / z[1] * l23;
    let mm = [
        -big_theta,
        (ll[2] * z[2] * l23 + ll[1] * e[0] * big_theta) / l23sq,
        (-ll[1] * z[2] * l23 + ll[2] * e[0] * big_theta) / l23sq,
    ];
    let p4 = [-params.energy, state.pr, 0.0, pphi];
    let point = SpacetimePoint::new(0.0, state.r, theta, 0.0);
    Ok(FullState::new(point, p4, ll, mm))
}

#[derive(Debug, Clone, Copy)]
pub struct ReconstructedRates {
    pub theta: f64,
    pub dphi: f64,
    pub dt: f64,
}

/// Angle data and the (phi, t) quadrature rates at the representative
/// configuration.
pub fn reconstruct_rates(
    state: &ReducedState,
    params: &IntegralParams,
    pphi_sign: f64,
) -> Result<ReconstructedRates> {
    let f = f_integral(&state.e);
    if f <= 0.0 {
        return Err(MpError::ReductionSingularity);
    }
    let pphi = pphi_sign * f.sqrt();
    let costh = state.e[0] / pphi;
    if costh.abs() > 1.0 {
        return Err(MpError::InvalidTheta);
    }
    let g = ham_gradient(state, params)?;
    let (e2, e3) = (state.e[1], state.e[2]);
    let denom = e2 * e2 + e3 * e3;
    let dphi = pphi / denom * (e2 * g.g_e[1] + e3 * g.g_e[2]);
    Ok(ReconstructedRates {
        theta: costh.acos(),
        dphi,
        dt: -g.g_ee,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Q0Rates {
    pub h0: f64,
    pub dtheta: f64,
    pub dphi: f64,
    pub dt: f64,
    /// 1 - kappa^2/sin^2(theta); the branch sign toggles at its zeros.
    pub radicand: f64,
}

/// Restriction to the invariant manifold E = 0 (Q = 0 branch): H0 and the
/// angle rates for the current branch sign (upper sign corresponds to
/// L3 > 0).
pub fn q0_branch(
    z: &[f64; 3],
    r: f64,
    pr: f64,
    params: &IntegralParams,
    kappa: f64,
    theta: f64,
    upper: bool,
) -> Result<Q0Rates> {
    if !(kappa.abs() < 1.0) {
        return Err(MpError::OutsideDomain {
            what: format!("kappa = {kappa} is not inside (-1, 1)"),
        });
    }
    let state = ReducedState::new([0.0; 3], *z, r, pr);
    let g = ham_gradient(&state, params).map_err(|e| match e {
        MpError::SingularV { .. } => MpError::SingularV0,
        other => other,
    })?;
    let s = theta.sin();
    let radicand = 1.0 - kappa * kappa / (s * s);
    if radicand < 0.0 {
        return Err(MpError::InvalidTheta);
    }
    let root = radicand.sqrt();
    let sgn = if upper { 1.0 } else { -1.0 };
    let dtheta = sgn * root * g.g_e[1] - kappa / s * g.g_e[2];
    let dphi = -kappa / (s * s) * g.g_e[1] - sgn * root / s * g.g_e[2];
    Ok(Q0Rates {
        h0: g.value,
        dtheta,
        dphi,
        dt: -g.g_ee,
        radicand,
    })
}

/// Spin direction 4-vector in the reduced variables at the representative
/// configuration (P_r = 0 slice; used on the circular-orbit families).
pub fn pl_vector_red(
    state: &ReducedState,
    params: &IntegralParams,
    pphi_sign: f64,
) -> Result<[f64; 4]> {
    let mu = params.mu;
    let ee = params.energy;
    let (e1, e2, e3) = (state.e[0], state.e[1], state.e[2]);
    let (z1, z2, z3) = (state.z[0], state.z[1], state.z[2]);
    let r = state.r;
    let s_cap = z2 * z2 - e1 * e1;
    if s_cap <= 0.0 {
        return Err(MpError::SingularE1Z2 { value: s_cap });
    }
    let sq = s_cap.sqrt();
    let b = 1.0 - 2.0 * mu / r;
    let f = f_integral(&state.e);
    if f <= 0.0 {
        return Err(MpError::ReductionSingularity);
    }
    let pphi = pphi_sign * f.sqrt();
    let costh = e1 / pphi;
    if costh.abs() > 1.0 {
        return Err(MpError::InvalidTheta);
    }
    let sinth = (1.0 - costh * costh).sqrt();
    let rr2 = (r * (r - 2.0 * mu)).sqrt();
    let st = e3 * sq / rr2;
    let sr = b.sqrt() / (r * z2) * (e1 * e2 * z1 + e3 * z2 * z3)
        - ee * e1
        - (r - 3.0 * mu) * z1 * e1 * sq / (r * r * z2);
    let e23 = e2 * e2 + e3 * e3;
    let sth = sq / (pphi * z2 * r.powf(2.5) * sinth * (r - 2.0 * mu).sqrt())
        * (e2 * z1 * (r - 3.0 * mu) * sq - z1 * e23 * rr2 + r * r * ee * e2 * z2);
    let sph = e3 * pphi * sq / (r.powf(2.5) * (r - 2.0 * mu).sqrt() * z2 * e23)
        * (ee * r * r * z2 + z1 * (r - 3.0 * mu) * sq);
    Ok([st, sr, sth, sph])
}
