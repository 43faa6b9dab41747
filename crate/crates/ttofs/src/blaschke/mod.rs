//! Blaschke products: construction, validation, evaluation, and
//! transformation of finite or rule-generated zero sequences.
//!
//! A Blaschke product with zeros λ_1, λ_2, … (|λ_k| < 1, multiplicities by
//! repetition) has partial products
//!
//! ```text
//! u_n(z) = Π_{k ≤ n} b_{λ_k}(z),    b_λ(z) = (|λ|/λ)·(λ − z)/(1 − conj(λ)z),
//! ```
//!
//! with the convention b₀(z) = z. Each factor is unimodular on the circle.
//! The infinite product converges exactly when Σ (1 − |λ_k|) < ∞.
//!
//! Zeros are stored in boundary-gap form ([`Zero`]), which keeps full relative
//! precision for families such as λ_k = 1 − 2⁻ᵏ far past the point where the
//! complex value itself rounds to 1.

pub mod families;
mod zero;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::jet::Jet;

pub use families::{catalog, FamilyCatalogEntry, ThetaRule, Verdict, ZeroFamily};
pub use zero::Zero;

/// A Blaschke product given by a materialized prefix of its zero sequence,
/// optionally backed by a generator rule for classification.
#[derive(Clone, Debug)]
pub struct BlaschkeProduct {
    zeros: Vec<Zero>,
    generator: Option<ZeroFamily>,
    /// True when the materialized list is the *complete* zero set (a finite
    /// product), as opposed to a prefix of an unspecified infinite sequence.
    complete: bool,
    ordering_flag: bool,
}

impl BlaschkeProduct {
    /// Materializes the first `n` zeros of a named family.
    pub fn from_family(family: ZeroFamily, n: usize) -> Result<Self> {
        if n == 0 {
            return domain("a Blaschke product needs at least one zero");
        }
        if let Some(count) = family.count() {
            if n > count {
                return domain(format!(
                    "family {} provides {count} zeros, asked to materialize {n}",
                    family.name()
                ));
            }
        }
        let mut zeros = Vec::with_capacity(n);
        for k in 1..=n {
            zeros.push(family.zero(k)?);
        }
        let complete = family.count() == Some(n);
        let ordering_flag = is_nondecreasing(&zeros);
        Ok(BlaschkeProduct { zeros, generator: Some(family), complete, ordering_flag })
    }

    /// Builds a *finite* product from an explicit zero list.
    ///
    /// Zeros are normalized to nondecreasing modulus; ties in modulus are
    /// broken by argument in [0, 2π), then by input order.
    pub fn from_zeros(zeros: &[Complex64]) -> Result<Self> {
        let mut zs = zeros.iter().map(|&z| Zero::from_complex(z)).collect::<Result<Vec<_>>>()?;
        if zs.is_empty() {
            return domain("a Blaschke product needs at least one zero");
        }
        sort_zeros(&mut zs);
        Ok(BlaschkeProduct { zeros: zs, generator: None, complete: true, ordering_flag: true })
    }

    /// Builds a product from a raw prefix of an unspecified infinite zero
    /// sequence; the Blaschke-condition verdict for such input is `unknown`.
    pub fn from_zero_prefix(zeros: &[Complex64]) -> Result<Self> {
        let mut p = Self::from_zeros(zeros)?;
        p.complete = false;
        Ok(p)
    }

    /// Builds a finite product directly from gap/phase zeros (no sorting).
    pub fn from_gap_zeros(zeros: Vec<Zero>, complete: bool) -> Result<Self> {
        if zeros.is_empty() {
            return domain("a Blaschke product needs at least one zero");
        }
        let ordering_flag = is_nondecreasing(&zeros);
        Ok(BlaschkeProduct { zeros, generator: None, complete, ordering_flag })
    }

    /// The materialized zeros.
    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    /// Number of materialized zeros.
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    /// True when no zeros are materialized (cannot happen by construction).
    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// The generator rule, when the product is family-backed.
    pub fn generator(&self) -> Option<&ZeroFamily> {
        self.generator.as_ref()
    }

    /// True when the materialized zero list is the complete zero set.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// True when |λ_k| is nondecreasing over the materialized prefix.
    pub fn ordering_flag(&self) -> bool {
        self.ordering_flag
    }

    /// The first `n` zeros, or a domain error when fewer are materialized.
    pub fn prefix(&self, n: usize) -> Result<&[Zero]> {
        if n == 0 {
            return domain("partial products need n ≥ 1");
        }
        if n > self.zeros.len() {
            return domain(format!(
                "only {} zeros materialized, asked for the order-{n} partial product",
                self.zeros.len()
            ));
        }
        Ok(&self.zeros[..n])
    }

    /// The product with conjugated zeros; realizes conj(ũ) on the circle via
    /// the factor identity conj(b̃_λ) = b_{conj λ}.
    pub fn reflect(&self) -> Self {
        BlaschkeProduct {
            zeros: self.zeros.iter().map(Zero::conj).collect(),
            generator: None,
            complete: self.complete,
            ordering_flag: self.ordering_flag,
        }
    }

    /// Taylor coefficients (length `len`) of the order-`n` partial product.
    pub fn partial_product_jet(&self, n: usize, len: usize) -> Result<Jet> {
        Ok(product_jet(self.prefix(n)?, len))
    }

    /// Evaluates the order-`n` partial product at the circle point e^{iθ}
    /// using the cancellation-free factor forms.
    pub fn eval_at_circle(&self, n: usize, theta: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for z in self.prefix(n)? {
            acc *= z.factor_at_circle(theta);
        }
        Ok(acc)
    }
}

fn is_nondecreasing(zs: &[Zero]) -> bool {
    zs.windows(2).all(|w| w[0].gap() >= w[1].gap())
}

/// Sorts by modulus, breaking ties by argument in [0, 2π) then input order.
fn sort_zeros(zs: &mut [Zero]) {
    let tau = 2.0 * std::f64::consts::PI;
    zs.sort_by(|a, b| {
        // Nondecreasing modulus = nonincreasing gap.
        b.gap()
            .partial_cmp(&a.gap())
            .unwrap()
            .then_with(|| {
                let pa = a.phase().rem_euclid(tau);
                let pb = b.phase().rem_euclid(tau);
                pa.partial_cmp(&pb).unwrap()
            })
    });
}

/// Taylor coefficients (length `len`) of a finite product of factors.
pub(crate) fn product_jet(zeros: &[Zero], len: usize) -> Jet {
    let mut jet = Jet::constant(Complex64::new(1.0, 0.0), len);
    for z in zeros {
        jet = z.apply_factor(&jet);
    }
    jet
}

/// An empirical estimate of the boundary part of the spectrum of the inner
/// function: the cluster directions of zeros approaching the circle.
#[derive(Clone, Debug)]
pub struct BoundaryClusterEstimate {
    /// Deduplicated unimodular cluster directions λ/|λ|.
    pub points: Vec<Complex64>,
    /// Modulus threshold used for the estimate.
    pub radius_used: f64,
    /// Number of zeros that passed the threshold.
    pub count_used: usize,
    /// Set when no zero reached the threshold.
    pub empty_warning: bool,
}

/// Evaluates a single Blaschke factor b_λ(z); returns z when λ = 0.
///
/// The result is unimodular whenever |z| = 1.
pub fn factor_eval(lambda: Complex64, z: Complex64) -> Result<Complex64> {
    let r = lambda.norm();
    if r >= 1.0 {
        return domain(format!("Blaschke factor needs |λ| < 1, got |λ| = {r}"));
    }
    if r == 0.0 {
        return Ok(z);
    }
    Ok((r / lambda) * (lambda - z) / (Complex64::new(1.0, 0.0) - lambda.conj() * z))
}

/// Evaluates the order-`n` partial product Π_{k ≤ n} b_{λ_k}(z).
pub fn partial_product_eval(u: &BlaschkeProduct, n: usize, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for zero in u.prefix(n)? {
        acc *= zero.factor_at(z);
    }
    Ok(acc)
}

/// Partial sum Σ_{k ≤ n}(1 − |λ_k|) of the Blaschke condition together with
/// the analytic verdict for the underlying family.
///
/// The partial sum is a sum of stored gaps, so it is exact even when the
/// individual moduli round to 1. The verdict is analytic for named generator
/// families and for complete finite products (always converging); a raw
/// prefix of an unspecified sequence yields `unknown`.
pub fn check_blaschke_condition(u: &BlaschkeProduct, n: usize) -> Result<(f64, Verdict)> {
    let zeros = u.prefix(n)?;
    let partial_sum: f64 = zeros.iter().map(Zero::gap).sum();
    let verdict = match u.generator() {
        Some(f) => f.verdict(),
        None if u.is_complete() => Verdict::Converging,
        None => Verdict::Unknown,
    };
    Ok((partial_sum, verdict))
}

/// The product with conjugated zeros (free-function form of
/// [`BlaschkeProduct::reflect`]).
pub fn reflect(u: &BlaschkeProduct) -> BlaschkeProduct {
    u.reflect()
}

/// Estimates the boundary cluster set of the first `n` zeros: the circle
/// directions λ/|λ| of zeros with |λ| ≥ radius, deduplicated by an angular
/// tolerance of 1e−8.
pub fn boundary_cluster(u: &BlaschkeProduct, n: usize, radius: f64) -> Result<BoundaryClusterEstimate> {
    if !(radius > 0.0 && radius < 1.0) {
        return domain(format!("cluster radius must lie in (0,1), got {radius}"));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let tol = 1e-8;
    let mut phases: Vec<f64> = Vec::new();
    let mut count_used = 0usize;
    for z in u.prefix(n)? {
        if z.modulus() >= radius {
            count_used += 1;
            let p = z.phase().rem_euclid(tau);
            let dup = phases.iter().any(|&q| {
                let d = (p - q).abs();
                d < tol || (tau - d) < tol
            });
            if !dup {
                phases.push(p);
            }
        }
    }
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(BoundaryClusterEstimate {
        points: phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect(),
        radius_used: radius,
        count_used,
        empty_warning: count_used == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factor_eval_examples() {
        // b₀(z) = z.
        assert_eq!(factor_eval(c(0.0, 0.0), c(0.0, 0.5)).unwrap(), c(0.0, 0.5));
        // Zero of the factor.
        assert!(factor_eval(c(0.5, 0.0), c(0.5, 0.0)).unwrap().norm() < 1e-15);
        // Value at the origin is |λ|.
        assert!((factor_eval(c(0.5, 0.0), c(0.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        // Unimodular on the circle.
        let t = Complex64::from_polar(1.0, std::f64::consts::PI / 7.0);
        let v = factor_eval(c(0.3, 0.4), t).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-14);
        // Rejects |λ| ≥ 1.
        assert!(factor_eval(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn partial_products_multiply_factors() {
        let u = BlaschkeProduct::from_family(ZeroFamily::AllZeroPrefix { count: 3 }, 3).unwrap();
        let z = c(0.2, 0.3);
        let v = partial_product_eval(&u, 3, z).unwrap();
        assert!((v - z * z * z).norm() < 1e-15);

        let u2 = BlaschkeProduct::from_zeros(&[c(0.3, 0.0), c(0.0, 0.5)]).unwrap();
        // At z = 0 the product of factors is Π |λ_k| = 0.15; cross-checked by
        // direct per-factor evaluation.
        let v0 = partial_product_eval(&u2, 2, c(0.0, 0.0)).unwrap();
        let direct = factor_eval(c(0.3, 0.0), c(0.0, 0.0)).unwrap()
            * factor_eval(c(0.0, 0.5), c(0.0, 0.0)).unwrap();
        assert!((v0 - c(0.15, 0.0)).norm() < 1e-15);
        assert!((v0 - direct).norm() < 1e-15);
        // Vanishes at each zero.
        assert!(partial_product_eval(&u2, 2, c(0.0, 0.5)).unwrap().norm() < 1e-15);
        // Insufficient zeros → domain error.
        assert!(partial_product_eval(&u2, 3, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn unimodular_on_grid_for_extreme_family() {
        let fam = ZeroFamily::GeometricRadius { ratio: 0.5, theta: ThetaRule::default() };
        let u = BlaschkeProduct::from_family(fam, 64).unwrap();
        for m in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / 64.0;
            let v = u.eval_at_circle(64, theta).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12, "|u({m})| = {}", v.norm());
        }
    }

    #[test]
    fn blaschke_condition_partial_sums_and_verdicts() {
        let geo = BlaschkeProduct::from_family(
            ZeroFamily::GeometricRadius { ratio: 0.5, theta: ThetaRule::default() },
            20,
        )
        .unwrap();
        let (sum, verdict) = check_blaschke_condition(&geo, 20).unwrap();
        assert!((sum - (1.0 - 0.5f64.powi(20))).abs() < 1e-15);
        assert_eq!(verdict, Verdict::Converging);

        let harm = BlaschkeProduct::from_family(
            ZeroFamily::HarmonicRadius { offset: 1, theta: ThetaRule::default() },
            20,
        )
        .unwrap();
        assert_eq!(check_blaschke_condition(&harm, 20).unwrap().1, Verdict::Diverging);

        let finite =
            BlaschkeProduct::from_zeros(&[c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.0, 0.4), c(0.5, 0.0)])
                .unwrap();
        assert_eq!(check_blaschke_condition(&finite, 5).unwrap().1, Verdict::Converging);

        let prefix = BlaschkeProduct::from_zero_prefix(&[c(0.1, 0.0), c(0.2, 0.0)]).unwrap();
        assert_eq!(check_blaschke_condition(&prefix, 2).unwrap().1, Verdict::Unknown);
    }

    #[test]
    fn reflection_is_an_involution_and_fixes_real_zeros() {
        let u = BlaschkeProduct::from_zeros(&[c(0.0, 0.5), c(0.5, 0.0)]).unwrap();
        let r = u.reflect();
        // {0.5i} → {−0.5i}; real zeros fixed.
        let vals: Vec<Complex64> = r.zeros().iter().map(Zero::value).collect();
        assert!(vals.iter().any(|v| (v - c(0.0, -0.5)).norm() < 1e-15));
        assert!(vals.iter().any(|v| (v - c(0.5, 0.0)).norm() < 1e-15));
        let rr = r.reflect();
        for (a, b) in rr.zeros().iter().zip(u.zeros()) {
            assert_eq!(a.gap(), b.gap());
            assert_eq!(a.phase(), b.phase());
        }
    }

    #[test]
    fn reflection_realizes_the_flip_identity_on_a_grid() {
        // conj(t⁻¹ · b_λ(t⁻¹)) = t⁻¹ · b_{conj λ}(t) up to the factor phase
        // convention; in product form: conj(u_n(1/t)) = reflected u_n(t) on |t|=1.
        let u = BlaschkeProduct::from_zeros(&[c(0.3, 0.4), c(-0.2, 0.1), c(0.0, -0.6)]).unwrap();
        let r = u.reflect();
        for m in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / 64.0;
            let lhs = u.eval_at_circle(3, -theta).unwrap().conj();
            let rhs = r.eval_at_circle(3, theta).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn boundary_cluster_finds_phase_classes() {
        let fam = ZeroFamily::GeometricRadius { ratio: 0.5, theta: ThetaRule::default() };
        let u = BlaschkeProduct::from_family(fam, 20).unwrap();
        let est = boundary_cluster(&u, 20, 0.9).unwrap();
        assert_eq!(est.points.len(), 1);
        assert!((est.points[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(!est.empty_warning);

        let fam3 = ZeroFamily::GeometricRadius {
            ratio: 0.5,
            theta: ThetaRule::RootsOfUnity { order: 3 },
        };
        let u3 = BlaschkeProduct::from_family(fam3, 21).unwrap();
        let est3 = boundary_cluster(&u3, 21, 0.9).unwrap();
        assert_eq!(est3.points.len(), 3);
        for p in &est3.points {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }

        // All zeros inside the radius → empty with warning.
        let small = BlaschkeProduct::from_zeros(&[c(0.1, 0.0), c(0.2, 0.0)]).unwrap();
        let est0 = boundary_cluster(&small, 2, 0.9).unwrap();
        assert!(est0.points.is_empty());
        assert!(est0.empty_warning);
    }

    #[test]
    fn explicit_zeros_are_sorted_by_modulus_then_argument() {
        let u = BlaschkeProduct::from_zeros(&[c(-0.7, 0.0), c(0.3, 0.0), c(0.0, 0.5)]).unwrap();
        let mods: Vec<f64> = u.zeros().iter().map(Zero::modulus).collect();
        assert!(mods.windows(2).all(|w| w[0] <= w[1]));
        assert!(u.ordering_flag());
        // Tie in modulus broken by argument in [0, 2π).
        let tie = BlaschkeProduct::from_zeros(&[c(0.0, -0.5), c(0.0, 0.5)]).unwrap();
        assert!((tie.zeros()[0].value() - c(0.0, 0.5)).norm() < 1e-15);
        assert!((tie.zeros()[1].value() - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn product_jet_matches_pointwise_values() {
        let u = BlaschkeProduct::from_zeros(&[c(0.3, 0.4), c(-0.5, 0.1), c(0.0, 0.0)]).unwrap();
        let jet = u.partial_product_jet(3, 64).unwrap();
        for &z in &[c(0.1, 0.2), c(-0.3, 0.1), c(0.0, 0.0)] {
            let direct = partial_product_eval(&u, 3, z).unwrap();
            assert!((jet.eval(z) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn product_jet_is_exact_for_extreme_zeros() {
        // A single factor with gap 2⁻⁷⁰: coefficient 0 must be exactly 1 − 2⁻⁷⁰
        // and coefficient 1 exactly −δ(2−δ).
        let delta = 2f64.powi(-70);
        let z = Zero::from_gap_phase(delta, 0.0).unwrap();
        let u = BlaschkeProduct::from_gap_zeros(vec![z], true).unwrap();
        let jet = u.partial_product_jet(1, 3).unwrap();
        assert_eq!(jet.coeff(0).re, 1.0 - delta);
        let exact1 = -(delta * (2.0 - delta));
        assert!(((jet.coeff(1).re - exact1) / exact1).abs() < 1e-15);
    }
}
