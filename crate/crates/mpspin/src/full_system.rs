//! The unreduced pole-dipole system. State is carried in tetrad variables
//! (P, L, M) at a spacetime point; coordinate momentum p_alpha and the
//! contravariant spin tensor S^{alpha beta} are derived views. The closed
//! equations of motion are evaluated covariantly and pushed forward to the
//! tetrad variables with exact frame derivatives.

#![allow(non_snake_case)]

use crate::error::{MpError, Result};
use crate::geometry::{self, GeometryCache, SpacetimePoint};

pub type Mat4 = [[f64; 4]; 4];

/// Guard scale for the velocity denominator 2m^2 - d. Below this the
/// k = 0 branch surface N = p.p - R S S / 4 = (d - 2m^2)/2 is reached and
/// the pole-dipole flow is no longer mass-conserving.
pub const VELOCITY_DENOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullState {
    pub point: SpacetimePoint,
    pub P: [f64; 4],
    pub L: [f64; 3],
    pub M: [f64; 3],
}

#[derive(Debug, Clone, Copy)]
pub struct FullRhs {
    pub dy: [f64; 4],
    pub dP: [f64; 4],
    pub dL: [f64; 3],
    pub dM: [f64; 3],
}

/// Antisymmetric tetrad-index spin matrix S^{AB} built from (M, L):
/// first row M, spatial block the hat-matrix of L.
pub fn spin_tetrad_matrix(L: &[f64; 3], M: &[f64; 3]) -> Mat4 {
    let mut s = [[0.0; 4]; 4];
    for i in 0..3 {
        s[0][i + 1] = M[i];
        s[i + 1][0] = -M[i];
    }
    s[1][2] = L[2];
    s[2][1] = -L[2];
    s[1][3] = -L[1];
    s[3][1] = L[1];
    s[2][3] = L[0];
    s[3][2] = -L[0];
    s
}

fn lm_from_spin_tetrad(sab: &Mat4) -> ([f64; 3], [f64; 3]) {
    let M = [sab[0][1], sab[0][2], sab[0][3]];
    let L = [sab[2][3], -sab[1][3], sab[1][2]];
    (L, M)
}

#[cfg(test)]
fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl FullState {
    pub fn new(point: SpacetimePoint, P: [f64; 4], L: [f64; 3], M: [f64; 3]) -> Self {
        FullState { point, P, L, M }
    }

    /// S^{AB} in the orthonormal frame.
    pub fn spin_tetrad(&self) -> Mat4 {
        spin_tetrad_matrix(&self.L, &self.M)
    }

    /// Casimirs of the so(3,1) block: (C_star, C_circ) = ((L,M), (L,L)-(M,M)).
    pub fn casimirs(&self) -> (f64, f64) {
        (
            dot3(&self.L, &self.M),
            dot3(&self.L, &self.L) - dot3(&self.M, &self.M),
        )
    }

    /// Coordinate views: covariant momentum p_alpha and contravariant
    /// spin S^{alpha beta}.
    pub fn coord_views(&self, mu: f64) -> Result<([f64; 4], Mat4)> {
        let geo = GeometryCache::at(&self.point, mu)?;
        let sab = self.spin_tetrad();
        // S^{ab} = e_A^a e_B^b S^{AB}; the tetrad is diagonal here.
        let mut s = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                s[a][b] = geo.tetrad[a][a] * geo.tetrad[b][b] * sab[a][b];
            }
        }
        // p_alpha = P_alpha + 1/2 omega_{alpha AB} S^{AB}
        let mut p = self.P;
        for al in 0..4 {
            let mut acc = 0.0;
            for aa in 0..4 {
                for bb in 0..4 {
                    acc += geo.omega[al][aa][bb] * sab[aa][bb];
                }
            }
            p[al] += 0.5 * acc;
        }
        Ok((p, s))
    }

    /// Inverse of coord_views: build the tetrad-variable state from the
    /// coordinate momentum and spin tensor.
    pub fn from_coord(y: [f64; 4], p: [f64; 4], s: Mat4, mu: f64) -> Result<Self> {
        let point = SpacetimePoint::new(y[0], y[1], y[2], y[3]);
        let geo = GeometryCache::at(&point, mu)?;
        let mut sab = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                sab[a][b] = geo.cotetrad[a][a] * geo.cotetrad[b][b] * s[a][b];
            }
        }
        let (L, M) = lm_from_spin_tetrad(&sab);
        let mut P = p;
        for al in 0..4 {
            let mut acc = 0.0;
            for aa in 0..4 {
                for bb in 0..4 {
                    acc += geo.omega[al][aa][bb] * sab[aa][bb];
                }
            }
            P[al] -= 0.5 * acc;
        }
        Ok(FullState { point, P, L, M })
    }

    /// Flat packing (y, P, L, M) for the integrator.
    pub fn to_vector(&self) -> [f64; 14] {
        let y = self.point.coords();
        [
            y[0], y[1], y[2], y[3], self.P[0], self.P[1], self.P[2], self.P[3], self.L[0],
            self.L[1], self.L[2], self.M[0], self.M[1], self.M[2],
        ]
    }

    pub fn from_vector(v: &[f64; 14]) -> Self {
        FullState {
            point: SpacetimePoint::new(v[0], v[1], v[2], v[3]),
            P: [v[4], v[5], v[6], v[7]],
            L: [v[8], v[9], v[10]],
            M: [v[11], v[12], v[13]],
        }
    }
}

fn dmatrix_cov(geo: &GeometryCache, s: &Mat4) -> (Mat4, f64) {
    // Q_{gb} = R_{gbmn} S^{mn}
    let mut q = [[0.0; 4]; 4];
    for g in 0..4 {
        for b in 0..4 {
            let mut acc = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    acc += geo.riemann[g][b][m][n] * s[m][n];
                }
            }
            q[g][b] = acc;
        }
    }
    // D^a_b = S^{ag} Q_{gb}
    let mut d = [[0.0; 4]; 4];
    let mut tr = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = 0.0;
            for g in 0..4 {
                acc += s[a][g] * q[g][b];
            }
            d[a][b] = acc;
        }
        tr += d[a][a];
    }
    (d, 0.5 * tr)
}

/// D^alpha_beta = S^{alpha gamma} R_{gamma beta mu nu} S^{mu nu} and
/// d = tr(D)/2. On C_star = 0 states the identity D^2 = d D holds.
pub fn d_matrix(state: &FullState, mu: f64) -> Result<(Mat4, f64)> {
    let geo = GeometryCache::at(&state.point, mu)?;
    let (_, s) = state.coord_views(mu)?;
    Ok(dmatrix_cov(&geo, &s))
}

/// Dynamical mass m = sqrt(-p_alpha p^alpha).
pub fn mass(state: &FullState, mu: f64) -> Result<f64> {
    let geo = GeometryCache::at(&state.point, mu)?;
    let (p, _) = state.coord_views(mu)?;
    let mut pp = 0.0;
    for a in 0..4 {
        pp += geo.metric_inv_diag[a] * p[a] * p[a];
    }
    Ok((-pp).sqrt())
}

/// Spin magnitude squared c^2 = S_{ab} S^{ab} / 2.
pub fn spin_c2(state: &FullState, mu: f64) -> Result<f64> {
    let geo = GeometryCache::at(&state.point, mu)?;
    let (_, s) = state.coord_views(mu)?;
    let mut acc = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            acc += geo.metric_diag[a] * geo.metric_diag[b] * s[a][b] * s[a][b];
        }
    }
    Ok(0.5 * acc)
}

/// Tulczyjew residual f^alpha = S^{alpha beta} p_beta.
pub fn tulczyjew_residual(state: &FullState, mu: f64) -> Result<[f64; 4]> {
    let (p, s) = state.coord_views(mu)?;
    let mut f = [0.0; 4];
    for a in 0..4 {
        for b in 0..4 {
            f[a] += s[a][b] * p[b];
        }
    }
    Ok(f)
}

struct VelocityParts {
    u: [f64; 4],
    p_up: [f64; 4],
    U: f64,
}

fn velocity_parts(geo: &GeometryCache, p: &[f64; 4], s: &Mat4) -> Result<VelocityParts> {
    let mut p_up = [0.0; 4];
    let mut pp = 0.0;
    for a in 0..4 {
        p_up[a] = geo.metric_inv_diag[a] * p[a];
        pp += p[a] * p_up[a];
    }
    let m2 = -pp;
    let (dmat, d) = dmatrix_cov(geo, s);
    let denom = 2.0 * m2 - d;
    if denom.abs() < VELOCITY_DENOM_TOL * m2 {
        return Err(MpError::SingularV { value: denom });
    }
    let m = m2.sqrt();
    let mut dp_up = [0.0; 4];
    for a in 0..4 {
        for b in 0..4 {
            dp_up[a] += dmat[a][b] * p_up[b];
        }
    }
    let mut u = [0.0; 4];
    for a in 0..4 {
        u[a] = (p_up[a] + dp_up[a] / denom) / m;
    }
    // time-likeness indicator: |D p|^2_lowered / (d - 2m^2)^2 - m^2,
    // proportional to u.u on the Tulczyjew manifold
    let mut quad = 0.0;
    for a in 0..4 {
        quad += geo.metric_diag[a] * dp_up[a] * dp_up[a];
    }
    let U = quad / (denom * denom) - m2;
    Ok(VelocityParts { u, p_up, U })
}

/// Tulczyjew velocity with the k/m = 1 parametrization.
pub fn velocity(state: &FullState, mu: f64) -> Result<[f64; 4]> {
    let geo = GeometryCache::at(&state.point, mu)?;
    let (p, s) = state.coord_views(mu)?;
    let parts = velocity_parts(&geo, &p, &s)?;
    if parts.U >= 0.0 {
        return Err(MpError::SpacelikeVelocity { u: parts.U });
    }
    Ok(parts.u)
}

/// Time-likeness indicator U; the model requires U < 0.
pub fn timelike_u_full(state: &FullState, mu: f64) -> Result<f64> {
    let geo = GeometryCache::at(&state.point, mu)?;
    let (p, s) = state.coord_views(mu)?;
    Ok(velocity_parts(&geo, &p, &s)?.U)
}

/// H = p.p/(2m) - D^{ab} p_a p_b / (m (d + 2 p.p)); equals -m/2 on the
/// Tulczyjew manifold.
pub fn hamiltonian_full(state: &FullState, mu: f64) -> Result<f64> {
    let geo = GeometryCache::at(&state.point, mu)?;
    let (p, s) = state.coord_views(mu)?;
    hamiltonian_cov(&geo, &p, &s, None)
}

/// Same, with the mass treated as a fixed parameter (needed when taking
/// gradients: differentiating through m = sqrt(-pp) halves the flow).
fn hamiltonian_cov(geo: &GeometryCache, p: &[f64; 4], s: &Mat4, m_fixed: Option<f64>) -> Result<f64> {
    let mut p_up = [0.0; 4];
    let mut pp = 0.0;
    for a in 0..4 {
        p_up[a] = geo.metric_inv_diag[a] * p[a];
        pp += p[a] * p_up[a];
    }
    let m = match m_fixed {
        Some(v) => v,
        None => (-pp).sqrt(),
    };
    let (dmat, d) = dmatrix_cov(geo, s);
    let denom = d + 2.0 * pp;
    if denom.abs() < VELOCITY_DENOM_TOL * pp.abs() {
        return Err(MpError::SingularV { value: denom });
    }
    // D^{ab} p_a p_b with the second index raised
    let mut quad = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            quad += dmat[a][b] * geo.metric_inv_diag[b] * p[a] * p[b];
        }
    }
    Ok(pp / (2.0 * m) - quad / (m * denom))
}

/// Integrals (energy, Q1, Q2, P_phi) and F = (Q, Q) from the rotational
/// Killing fields.
pub fn conserved(state: &FullState) -> Result<(f64, [f64; 3], f64)> {
    let th = state.point.theta;
    let ph = state.point.phi;
    let (s, c) = th.sin_cos();
    if s == 0.0 {
        return Err(MpError::PolarAxis);
    }
    let pth = state.P[2];
    let pph = state.P[3];
    let ee = -state.P[0];
    let l1 = state.L[0];
    let q1 = ph.cos() / s * (l1 - pph * c) - pth * ph.sin();
    let q2 = ph.sin() / s * (l1 - pph * c) + pth * ph.cos();
    let f = pth * pth + pph * pph + (l1 - pph * c) * (l1 - pph * c) / (s * s);
    Ok((ee, [q1, q2, pph], f))
}

/// Closed equations of motion as rates of (y, P, L, M).
pub fn mp_rhs(state: &FullState, mu: f64) -> Result<FullRhs> {
    let geo = GeometryCache::at(&state.point, mu)?;
    let (p, s) = state.coord_views(mu)?;
    let parts = velocity_parts(&geo, &p, &s)?;
    if parts.U >= 0.0 {
        return Err(MpError::SpacelikeVelocity { u: parts.U });
    }
    let u = parts.u;
    let gam = &geo.christoffel;

    // covariant rates: Dp/dtau and DS/dtau unrolled to coordinate rates
    let mut dp = [0.0; 4];
    for a in 0..4 {
        let mut curv = 0.0;
        for l in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    curv += geo.riemann[a][l][m][n] * u[l] * s[m][n];
                }
            }
        }
        let mut conn = 0.0;
        for l in 0..4 {
            for n in 0..4 {
                conn += gam[l][a][n] * p[l] * u[n];
            }
        }
        dp[a] = -0.5 * curv + conn;
    }
    let mut ds = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = parts.p_up[a] * u[b] - u[a] * parts.p_up[b];
            for m in 0..4 {
                for n in 0..4 {
                    acc -= gam[a][m][n] * s[m][b] * u[n] + gam[b][m][n] * s[a][m] * u[n];
                }
            }
            ds[a][b] = acc;
        }
    }

    // pushforward to tetrad variables with exact frame derivatives
    let r = state.point.r;
    let th = state.point.theta;
    let a_lapse = geo.a;
    let sa = a_lapse.sqrt();
    let (sth, cth) = th.sin_cos();
    // co = diag(sqrt(a), 1/sqrt(a), r, r sin th) as a diagonal 4-vector
    let co = [sa, 1.0 / sa, r, r * sth];
    let dadr = 2.0 * mu / (r * r);
    let dco_dr = [
        dadr / (2.0 * sa),
        -dadr / (2.0 * a_lapse * sa),
        1.0,
        sth,
    ];
    let dco_dth = [0.0, 0.0, 0.0, r * cth];
    let mut dco = [0.0; 4];
    for i in 0..4 {
        dco[i] = dco_dr[i] * u[1] + dco_dth[i] * u[2];
    }

    let mut sab = [[0.0; 4]; 4];
    let mut dsab = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            sab[a][b] = co[a] * s[a][b] * co[b];
            dsab[a][b] = dco[a] * s[a][b] * co[b] + co[a] * ds[a][b] * co[b]
                + co[a] * s[a][b] * dco[b];
        }
    }
    let (dL, dM) = lm_from_spin_tetrad(&dsab);

    // omega rates along the flow; nonzero pattern mirrors geometry::omega
    let mut dw = [[[0.0; 4]; 4]; 4];
    {
        let entries: [(usize, usize, usize, f64); 4] = [
            (0, 0, 1, (2.0 * mu / (r * r * r)) * u[1]),
            (2, 1, 2, -dadr / (2.0 * sa) * u[1]),
            (3, 1, 3, -dadr / (2.0 * sa) * sth * u[1] - sa * cth * u[2]),
            (3, 2, 3, sth * u[2]),
        ];
        for &(al, aa, bb, v) in &entries {
            dw[al][aa][bb] = v;
            dw[al][bb][aa] = -v;
        }
    }
    let mut dP = [0.0; 4];
    for al in 0..4 {
        let mut acc = 0.0;
        for aa in 0..4 {
            for bb in 0..4 {
                acc += dw[al][aa][bb] * sab[aa][bb] + geo.omega[al][aa][bb] * dsab[aa][bb];
            }
        }
        dP[al] = dp[al] - 0.5 * acc;
    }

    Ok(FullRhs { dy: u, dP, dL, dM })
}

/// Packed-vector RHS for integrating the full system.
pub fn rhs_vector(v: &[f64; 14], mu: f64) -> Result<[f64; 14]> {
    let state = FullState::from_vector(v);
    let rhs = mp_rhs(&state, mu)?;
    Ok([
        rhs.dy[0], rhs.dy[1], rhs.dy[2], rhs.dy[3], rhs.dP[0], rhs.dP[1], rhs.dP[2], rhs.dP[3],
        rhs.dL[0], rhs.dL[1], rhs.dL[2], rhs.dM[0], rhs.dM[1], rhs.dM[2],
    ])
}

/// Levi-Civita permutation symbol with eps(0,1,2,3) = +1.
pub fn eps_symbol(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let idx = [a, b, c, d];
    let mut sgn = 1.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] == idx[j] {
                return 0.0;
            }
            if idx[i] > idx[j] {
                sgn = -sgn;
            }
        }
    }
    sgn
}

/// Spin 4-vector (Pauli-Lubanski direction)
/// S^a = eps^{abmn} p_b S_{mn} / (2 m sqrt(-g)).
pub fn pl_vector_cov(state: &FullState, mu: f64) -> Result<[f64; 4]> {
    let geo = GeometryCache::at(&state.point, mu)?;
    let (p, s) = state.coord_views(mu)?;
    let mut s_lo = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            s_lo[a][b] = geo.metric_diag[a] * geo.metric_diag[b] * s[a][b];
        }
    }
    let m = mass(state, mu)?;
    let mut out = [0.0; 4];
    for a in 0..4 {
        let mut acc = 0.0;
        for b in 0..4 {
            for mm in 0..4 {
                for n in 0..4 {
                    let e = eps_symbol(a, b, mm, n);
                    if e != 0.0 {
                        acc += e * p[b] * s_lo[mm][n];
                    }
                }
            }
        }
        out[a] = acc / (2.0 * m * geo.sqrt_neg_g);
    }
    Ok(out)
}

/// Random state on the Tulczyjew manifold (C_star = 0, rank-2 spin):
/// S^{ab} = eps^{abmn} p_m s_n / sqrt(-g) with s orthogonal to p.
pub fn sample_tulczyjew(rng: &mut impl rand::Rng, mu: f64, spin_scale: f64) -> FullState {
    let r = rng.gen_range(6.0..14.0);
    let th = rng.gen_range(0.7..2.4);
    let ph = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    let y = [0.0, r, th, ph];
    let g = geometry::metric_diag(r, th, mu);
    let mut p_up = [
        0.0,
        rng.gen_range(-0.12..0.12),
        rng.gen_range(-0.12..0.12) / r,
        rng.gen_range(-0.12..0.12) / r,
    ];
    let spat = g[1] * p_up[1] * p_up[1] + g[2] * p_up[2] * p_up[2] + g[3] * p_up[3] * p_up[3];
    p_up[0] = ((1.0 + spat) / (-g[0])).sqrt();
    let p = [g[0] * p_up[0], g[1] * p_up[1], g[2] * p_up[2], g[3] * p_up[3]];
    let mut s_up = [0.0; 4];
    for v in s_up.iter_mut() {
        *v = rng.gen_range(-1.0..1.0) * spin_scale;
    }
    let mut sp = 0.0;
    let mut pp = 0.0;
    for a in 0..4 {
        sp += s_up[a] * g[a] * p_up[a];
        pp += p_up[a] * g[a] * p_up[a];
    }
    for a in 0..4 {
        s_up[a] -= sp / pp * p_up[a];
    }
    let s_lo = [
        g[0] * s_up[0],
        g[1] * s_up[1],
        g[2] * s_up[2],
        g[3] * s_up[3],
    ];
    let sng = geometry::sqrt_neg_g(r, th);
    let mut s = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = 0.0;
            for m in 0..4 {
                for n in 0..4 {
                    let e = eps_symbol(a, b, m, n);
                    if e != 0.0 {
                        acc += e * p[m] * s_lo[n];
                    }
                }
            }
            s[a][b] = acc / sng;
        }
    }
    FullState::from_coord(y, p, s, mu).expect("sampled point is outside the horizon")
}
