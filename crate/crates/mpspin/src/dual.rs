//! Forward-mode dual numbers over a fixed 9-slot gradient.
//!
//! The reduced Hamiltonian is a scalar function of the eight phase-space
//! variables (E1,E2,E3,Z1,Z2,Z3,r,P_r) plus the energy parameter.  Seeding
//! one dual slot per variable gives the exact gradient in a single
//! evaluation, which the bracket equations and the time-like indicator
//! both consume.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const NDUAL: usize = 9;

/// Scalar abstraction so the Hamiltonian can be written once and evaluated
/// either on plain f64 or with derivatives attached.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(v: f64) -> Self;
    fn value(self) -> f64;
    fn sqrt(self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn lift(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Dual9 {
    pub v: f64,
    pub d: [f64; NDUAL],
}

impl Dual9 {
    #[inline]
    pub fn constant(v: f64) -> Self {
        Dual9 { v, d: [0.0; NDUAL] }
    }

    /// Variable seeded in slot `i`.
    #[inline]
    pub fn var(v: f64, i: usize) -> Self {
        let mut d = [0.0; NDUAL];
        d[i] = 1.0;
        Dual9 { v, d }
    }
}

impl Add for Dual9 {
    type Output = Dual9;
    #[inline]
    fn add(self, rhs: Dual9) -> Dual9 {
        let mut d = self.d;
        for k in 0..NDUAL {
            d[k] += rhs.d[k];
        }
        Dual9 { v: self.v + rhs.v, d }
    }
}

impl Sub for Dual9 {
    type Output = Dual9;
    #[inline]
    fn sub(self, rhs: Dual9) -> Dual9 {
        let mut d = self.d;
        for k in 0..NDUAL {
            d[k] -= rhs.d[k];
        }
        Dual9 { v: self.v - rhs.v, d }
    }
}

impl Mul for Dual9 {
    type Output = Dual9;
    #[inline]
    fn mul(self, rhs: Dual9) -> Dual9 {
        let mut d = [0.0; NDUAL];
        for k in 0..NDUAL {
            d[k] = self.d[k] * rhs.v + self.v * rhs.d[k];
        }
        Dual9 { v: self.v * rhs.v, d }
    }
}

impl Div for Dual9 {
    type Output = Dual9;
    #[inline]
    fn div(self, rhs: Dual9) -> Dual9 {
        let inv = 1.0 / rhs.v;
        let v = self.v * inv;
        let mut d = [0.0; NDUAL];
        for k in 0..NDUAL {
            d[k] = (self.d[k] - v * rhs.d[k]) * inv;
        }
        Dual9 { v, d }
    }
}

impl Neg for Dual9 {
    type Output = Dual9;
    #[inline]
    fn neg(self) -> Dual9 {
        let mut d = self.d;
        for k in 0..NDUAL {
            d[k] = -d[k];
        }
        Dual9 { v: -self.v, d }
    }
}

impl Real for Dual9 {
    #[inline]
    fn lift(v: f64) -> Self {
        Dual9::constant(v)
    }
    #[inline]
    fn value(self) -> f64 {
        self.v
    }
    #[inline]
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let half_inv = 0.5 / s;
        let mut d = self.d;
        for k in 0..NDUAL {
            d[k] *= half_inv;
        }
        Dual9 { v: s, d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f<T: Real>(x: T, y: T) -> T {
        // x^2 * sqrt(y) + x/y - y
        x * x * y.sqrt() + x / y - y
    }

    #[test]
    fn dual_matches_finite_differences() {
        let (x0, y0) = (1.3, 2.7);
        let g = f(Dual9::var(x0, 0), Dual9::var(y0, 1));
        let h = 1e-7;
        let dfx = (f(x0 + h, y0) - f(x0 - h, y0)) / (2.0 * h);
        let dfy = (f(x0, y0 + h) - f(x0, y0 - h)) / (2.0 * h);
        assert!((g.v - f(x0, y0)).abs() < 1e-15);
        assert!((g.d[0] - dfx).abs() < 1e-6, "d/dx {} vs {}", g.d[0], dfx);
        assert!((g.d[1] - dfy).abs() < 1e-6, "d/dy {} vs {}", g.d[1], dfy);
        for k in 2..NDUAL {
            assert_eq!(g.d[k], 0.0);
        }
    }

    #[test]
    fn division_and_sqrt_chain() {
        let x = Dual9::var(4.0, 3);
        let y = (Dual9::constant(1.0) / x).sqrt(); // 1/sqrt(x) = x^{-1/2}
        assert!((y.v - 0.5).abs() < 1e-15);
        // d/dx x^{-1/2} = -1/2 x^{-3/2} = -1/16
        assert!((y.d[3] + 1.0 / 16.0).abs() < 1e-15);
    }
}
