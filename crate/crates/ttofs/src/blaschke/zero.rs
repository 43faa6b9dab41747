//! Boundary-gap representation of disk zeros.
//!
//! A zero λ with |λ| < 1 is stored as the pair (gap, phase) with
//! λ = (1 − gap)·e^{i·phase}. Working with the gap δ = 1 − |λ| directly keeps
//! full relative precision for zeros exponentially close to the unit circle:
//! quantities such as
//!
//! - `1 − |λ|²  = δ(2 − δ)`,
//! - `1 − conj(λ₁)λ₂` and `λ₁ − λ₂` via half-angle phase differences,
//!
//! never suffer the catastrophic cancellation that the raw complex value
//! `λ = 1 − 2⁻ᵏ` incurs once `2⁻ᵏ` falls below the f64 spacing at 1.

use num_complex::Complex64;

use crate::error::{domain, Result};

/// A zero of a Blaschke product, stored as distance-to-circle and phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    gap: f64,
    phase: f64,
}

impl Zero {
    /// Builds a zero from its boundary gap `δ = 1 − |λ|` and phase.
    ///
    /// This constructor accepts arbitrarily small positive gaps; it is the
    /// entry point used by rule-generated families whose zeros approach the
    /// circle faster than f64 spacing allows in value form.
    pub fn from_gap_phase(gap: f64, phase: f64) -> Result<Self> {
        if !(gap > 0.0 && gap <= 1.0) || !gap.is_finite() || !phase.is_finite() {
            return domain(format!(
                "zero must satisfy 0 < 1 − |λ| ≤ 1 with finite phase, got gap {gap}, phase {phase}"
            ));
        }
        Ok(Zero { gap, phase })
    }

    /// Builds a zero from a complex value with |λ| < 1 − 1e−12.
    ///
    /// Raw complex input close to the circle has already lost the gap
    /// information to rounding, so values with `|λ| ≥ 1 − 1e−12` are rejected;
    /// use [`Zero::from_gap_phase`] for such zeros.
    pub fn from_complex(lambda: Complex64) -> Result<Self> {
        let r = lambda.norm();
        if !(r < 1.0 - 1e-12) {
            return domain(format!(
                "zero modulus must be < 1 − 1e−12 (got |λ| = {r:.17}); \
                 construct near-boundary zeros from their gap instead"
            ));
        }
        let phase = if r == 0.0 { 0.0 } else { lambda.arg() };
        Ok(Zero { gap: 1.0 - r, phase })
    }

    /// The origin zero λ = 0.
    pub fn origin() -> Self {
        Zero { gap: 1.0, phase: 0.0 }
    }

    /// Distance to the unit circle, `1 − |λ|`.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Phase of the zero (arbitrary for the origin).
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Modulus `|λ| = 1 − gap`.
    pub fn modulus(&self) -> f64 {
        1.0 - self.gap
    }

    /// True for λ = 0.
    pub fn is_origin(&self) -> bool {
        self.gap >= 1.0
    }

    /// The complex value `λ` (lossy near the circle; prefer the stable ops).
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.modulus(), self.phase)
    }

    /// `1 − |λ|²`, computed as `gap·(2 − gap)` without cancellation.
    pub fn s_sqr(&self) -> f64 {
        self.gap * (2.0 - self.gap)
    }

    /// `sqrt(1 − |λ|²)`, the normalization of the reproducing-kernel factor.
    pub fn s(&self) -> f64 {
        self.s_sqr().sqrt()
    }

    /// The reflected zero `conj(λ)`.
    pub fn conj(&self) -> Self {
        Zero { gap: self.gap, phase: -self.phase }
    }

    /// Unimodular phase factor `|λ|/λ = e^{−i·phase}` of the Blaschke factor,
    /// with the convention `−1` at the origin so that `b₀(z) = z`.
    pub fn phase_factor(&self) -> Complex64 {
        if self.is_origin() {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, -self.phase)
        }
    }

    /// `1 − conj(self)·other` without cancellation.
    ///
    /// With gaps g₁, g₂ and phase difference Δ = phase₂ − phase₁:
    /// `1 − conj(λ₁)λ₂ = (1 − e^{iΔ}) + σ·e^{iΔ}` where σ = g₁ + g₂ − g₁g₂ and
    /// `1 − e^{iΔ} = 2sin²(Δ/2) − i·sinΔ`.
    pub fn one_minus_conj_mul(&self, other: &Zero) -> Complex64 {
        let delta = other.phase - self.phase;
        let sigma = self.gap + other.gap - self.gap * other.gap;
        one_minus_scaled_phase(sigma, delta)
    }

    /// `1 − conj(self)·e^{iθ}` for a point on the unit circle.
    pub fn one_minus_conj_point(&self, theta: f64) -> Complex64 {
        one_minus_scaled_phase(self.gap, theta - self.phase)
    }

    /// `self − other` without cancellation, via half-angle phase differences.
    pub fn sub(&self, other: &Zero) -> Complex64 {
        sub_polar(self.gap, self.phase, other.gap, other.phase)
    }

    /// `e^{iθ} − self` for a point on the unit circle.
    pub fn point_minus(&self, theta: f64) -> Complex64 {
        sub_polar(0.0, theta, self.gap, self.phase)
    }

    /// Evaluates the Blaschke factor `b_λ` at the circle point `e^{iθ}`.
    ///
    /// Both the numerator `λ − e^{iθ}` and the denominator `1 − conj(λ)e^{iθ}`
    /// are produced by the stable half-angle forms, so the unimodular result
    /// keeps full precision however small the gap is.
    pub fn factor_at_circle(&self, theta: f64) -> Complex64 {
        if self.is_origin() {
            return Complex64::from_polar(1.0, theta);
        }
        let num = sub_polar(self.gap, self.phase, 0.0, theta);
        let den = self.one_minus_conj_point(theta);
        self.phase_factor() * num / den
    }

    /// Evaluates the Blaschke factor `b_λ` at another zero's position.
    pub fn factor_at_zero(&self, w: &Zero) -> Complex64 {
        if self.is_origin() {
            return w.value();
        }
        let num = self.sub(w);
        let den = self.one_minus_conj_mul(w);
        self.phase_factor() * num / den
    }

    /// Evaluates the Blaschke factor at an arbitrary complex point.
    ///
    /// The point is re-expressed in gap/phase form, so circle-adjacent
    /// evaluation points are handled as accurately as the input allows.
    pub fn factor_at(&self, z: Complex64) -> Complex64 {
        if self.is_origin() {
            return z;
        }
        let (r, theta) = (z.norm(), if z == Complex64::new(0.0, 0.0) { 0.0 } else { z.arg() });
        let zgap = 1.0 - r;
        let num = sub_polar(self.gap, self.phase, zgap, theta);
        let den = one_minus_conj_mul_raw(self.gap, self.phase, zgap, theta);
        self.phase_factor() * num / den
    }

    /// Applies multiplication by the factor `b_λ` to a jet, in O(len).
    ///
    /// Uses the exact splitting `b_λ(z) = |λ| − e^{−iφ}(1−|λ|²)·z/(1 − conj(λ)z)`,
    /// which keeps the small quantity `1−|λ|²` in factored form.
    pub fn apply_factor(&self, f: &crate::jet::Jet) -> crate::jet::Jet {
        if self.is_origin() {
            return f.mul_shift();
        }
        let lam_conj = self.conj().value();
        let tail = f
            .div_one_minus(lam_conj)
            .mul_shift()
            .scale(-self.phase_factor() * Complex64::new(self.s_sqr(), 0.0));
        f.clone().scale(Complex64::new(self.modulus(), 0.0)).add(&tail)
    }
}

/// `(1 − g₁)e^{iφ₁} − (1 − g₂)e^{iφ₂}` computed from half-angle forms.
fn sub_polar(g1: f64, p1: f64, g2: f64, p2: f64) -> Complex64 {
    let half_diff = 0.5 * (p1 - p2);
    let half_sum = 0.5 * (p1 + p2);
    let (s, c) = half_diff.sin_cos();
    let inner = Complex64::new((g2 - g1) * c, (2.0 - g1 - g2) * s);
    Complex64::from_polar(1.0, half_sum) * inner
}

/// `1 − (1 − σ)e^{iΔ}` with σ precombined from the gaps.
fn one_minus_scaled_phase(sigma: f64, delta: f64) -> Complex64 {
    let half = 0.5 * delta;
    let sh = half.sin();
    let (sd, cd) = delta.sin_cos();
    Complex64::new(2.0 * sh * sh + sigma * cd, (sigma - 1.0) * sd)
}

/// `1 − conj(λ₁)λ₂` for raw gap/phase pairs (λ₂ may lie outside the disk).
fn one_minus_conj_mul_raw(g1: f64, p1: f64, g2: f64, p2: f64) -> Complex64 {
    let sigma = g1 + g2 - g1 * g2;
    one_minus_scaled_phase(sigma, p2 - p1)
}
