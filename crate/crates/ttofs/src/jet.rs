//! Truncated Taylor series ("jets") at the origin.
//!
//! A [`Jet`] holds the first `len` Taylor coefficients of a function analytic in
//! a neighbourhood of 0. The operations provided here never mix a coefficient
//! with higher-order ones, so the retained window is *exact* (up to rounding of
//! the individual coefficient arithmetic):
//!
//! - multiplication by a polynomial factor `(λ − z)` is a two-term convolution;
//! - division by `(1 − w·z)` with `|w| < 1` is the stable forward recurrence
//!   `c'_m = c_m + w·c'_{m−1}`;
//! - general products are truncated convolutions.
//!
//! Finite Blaschke products have all their poles outside the closed unit disk,
//! so their Taylor coefficients at 0 are well conditioned even when the zeros
//! sit extremely close to the unit circle; jets are the primary representation
//! for those coefficients throughout the crate.

use num_complex::Complex64;

/// Truncated Taylor series at 0 with a fixed coefficient window.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    c: Vec<Complex64>,
}

impl Jet {
    /// The zero series with `len` retained coefficients.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "jet length must be positive");
        Jet { c: vec![Complex64::new(0.0, 0.0); len] }
    }

    /// The constant series `v`.
    pub fn constant(v: Complex64, len: usize) -> Self {
        let mut j = Jet::zeros(len);
        j.c[0] = v;
        j
    }

    /// The series of the identity function `z`.
    pub fn var(len: usize) -> Self {
        let mut j = Jet::zeros(len);
        if len > 1 {
            j.c[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    /// Builds a jet from explicit coefficients (padded or truncated to `len`).
    pub fn from_coeffs(coeffs: &[Complex64], len: usize) -> Self {
        let mut j = Jet::zeros(len);
        for (m, &v) in coeffs.iter().take(len).enumerate() {
            j.c[m] = v;
        }
        j
    }

    /// Number of retained coefficients.
    pub fn len(&self) -> usize {
        self.c.len()
    }

    /// True when no coefficients are retained (never happens by construction).
    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Coefficient of `z^m`, zero beyond the window.
    pub fn coeff(&self, m: usize) -> Complex64 {
        self.c.get(m).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// All retained coefficients.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// Consumes the jet and returns its coefficients.
    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.c
    }

    /// Scales every coefficient by `s`.
    pub fn scale(mut self, s: Complex64) -> Self {
        for v in &mut self.c {
            *v *= s;
        }
        self
    }

    /// Coefficient-wise sum (windows must match).
    pub fn add(&self, other: &Jet) -> Self {
        assert_eq!(self.len(), other.len(), "jet windows must match");
        let mut out = self.clone();
        for (o, v) in out.c.iter_mut().zip(&other.c) {
            *o += v;
        }
        out
    }

    /// Coefficient-wise difference (windows must match).
    pub fn sub(&self, other: &Jet) -> Self {
        assert_eq!(self.len(), other.len(), "jet windows must match");
        let mut out = self.clone();
        for (o, v) in out.c.iter_mut().zip(&other.c) {
            *o -= v;
        }
        out
    }

    /// Truncated product (windows must match).
    pub fn mul(&self, other: &Jet) -> Self {
        assert_eq!(self.len(), other.len(), "jet windows must match");
        let len = self.len();
        let mut out = Jet::zeros(len);
        for m in 0..len {
            if self.c[m] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let a = self.c[m];
            for k in 0..len - m {
                out.c[m + k] += a * other.c[k];
            }
        }
        out
    }

    /// Multiplies by the linear factor `(λ − z)`.
    pub fn mul_linear(&self, lambda: Complex64) -> Self {
        let len = self.len();
        let mut out = Jet::zeros(len);
        for m in 0..len {
            out.c[m] = lambda * self.c[m];
            if m > 0 {
                out.c[m] -= self.c[m - 1];
            }
        }
        out
    }

    /// Multiplies by `z` (shift of the coefficient window).
    pub fn mul_shift(&self) -> Self {
        let len = self.len();
        let mut out = Jet::zeros(len);
        for m in 1..len {
            out.c[m] = self.c[m - 1];
        }
        out
    }

    /// Divides by `(1 − w·z)` via the forward recurrence; stable for `|w| ≤ 1`.
    pub fn div_one_minus(&self, w: Complex64) -> Self {
        let len = self.len();
        let mut out = Jet::zeros(len);
        let mut prev = Complex64::new(0.0, 0.0);
        for m in 0..len {
            let v = self.c[m] + w * prev;
            out.c[m] = v;
            prev = v;
        }
        out
    }

    /// Horner evaluation of the truncated series at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &v in self.c.iter().rev() {
            acc = acc * z + v;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_matches_polynomial_multiplication() {
        // (1 + 2z)(3 + z + z^2) = 3 + 7z + 3z^2 + 2z^3
        let a = Jet::from_coeffs(&[c(1.0, 0.0), c(2.0, 0.0)], 6);
        let b = Jet::from_coeffs(&[c(3.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], 6);
        let p = a.mul(&b);
        let expect = [3.0, 7.0, 3.0, 2.0, 0.0, 0.0];
        for (m, e) in expect.iter().enumerate() {
            assert!((p.coeff(m) - c(*e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let w = c(0.7, -0.2);
        let f = Jet::from_coeffs(&[c(1.0, 0.5), c(-0.3, 0.1), c(0.0, 2.0)], 32);
        // (f/(1−wz))·(1−wz) = f on the full window.
        let g = f.div_one_minus(w);
        let back = g.mul_linear(Complex64::new(1.0, 0.0) / w).scale(w); // (1 − wz) = w·(1/w − z)
        for m in 0..32 {
            assert!(
                (back.coeff(m) - f.coeff(m)).norm() < 1e-13,
                "coefficient {m} mismatch"
            );
        }
    }

    #[test]
    fn division_by_one_minus_is_geometric_series() {
        let w = c(0.5, 0.0);
        let one = Jet::constant(c(1.0, 0.0), 10);
        let g = one.div_one_minus(w);
        for m in 0..10 {
            assert!((g.coeff(m) - c(0.5f64.powi(m as i32), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn eval_matches_direct_sum() {
        let f = Jet::from_coeffs(&[c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.5)], 3);
        let z = c(0.3, -0.4);
        let direct = f.coeff(0) + f.coeff(1) * z + f.coeff(2) * z * z;
        assert!((f.eval(z) - direct).norm() < 1e-15);
    }

    #[test]
    fn shift_and_linear_factor_agree_at_lambda_zero() {
        let f = Jet::from_coeffs(&[c(2.0, 0.0), c(1.0, 1.0)], 5);
        // (0 − z)·f = −z·f
        let a = f.mul_linear(c(0.0, 0.0));
        let b = f.mul_shift().scale(c(-1.0, 0.0));
        for m in 0..5 {
            assert_eq!(a.coeff(m), b.coeff(m));
        }
    }
}
