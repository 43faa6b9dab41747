//! Named zero families: rule-generated sequences of disk zeros with known
//! analytic classification (Blaschke condition verdict and boundary cluster set).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

use super::zero::Zero;

/// Verdict of the Blaschke condition `Σ (1 − |λ_k|) < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The partial sums converge (the infinite product exists), or the
    /// product is finite.
    Converging,
    /// The partial sums diverge.
    Diverging,
    /// No analytic classification is available (raw prefix of an
    /// unspecified sequence).
    Unknown,
}

/// Phase rule θ_k attached to a radius rule (k is 1-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThetaRule {
    /// θ_k = value for every k.
    Constant { value: f64 },
    /// θ_k = start + (k−1)·step.
    Arithmetic { start: f64, step: f64 },
    /// θ_k = 2π·k/order, cycling through the order-th roots of unity.
    RootsOfUnity { order: u32 },
}

impl Default for ThetaRule {
    fn default() -> Self {
        ThetaRule::Constant { value: 0.0 }
    }
}

impl ThetaRule {
    /// Phase of the k-th zero (k is 1-based).
    pub fn theta(&self, k: usize) -> f64 {
        match self {
            ThetaRule::Constant { value } => *value,
            ThetaRule::Arithmetic { start, step } => start + (k as f64 - 1.0) * step,
            ThetaRule::RootsOfUnity { order } => {
                let q = (*order).max(1);
                2.0 * std::f64::consts::PI * ((k as u32 % q) as f64) / q as f64
            }
        }
    }

    /// The closure of the phase set on the circle, when finite.
    fn phase_cluster(&self) -> Option<Vec<f64>> {
        match self {
            ThetaRule::Constant { value } => Some(vec![*value]),
            ThetaRule::RootsOfUnity { order } => {
                let q = (*order).max(1);
                Some(
                    (0..q)
                        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / q as f64)
                        .collect(),
                )
            }
            // An arithmetic phase progression is dense on the circle for
            // irrational step/2π; no finite cluster set is reported.
            ThetaRule::Arithmetic { .. } => None,
        }
    }
}

/// A named generator rule producing the k-th zero for arbitrary k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ZeroFamily {
    /// λ_k = (1 − ratio^k)·e^{iθ_k}: geometric approach to the boundary.
    /// Satisfies the Blaschke condition for 0 < ratio < 1.
    GeometricRadius {
        ratio: f64,
        #[serde(default)]
        theta: ThetaRule,
    },
    /// λ_k = (1 − 1/(k + offset))·e^{iθ_k}: harmonic approach to the boundary.
    /// The gap series is harmonic, so the Blaschke condition fails.
    HarmonicRadius {
        #[serde(default = "default_offset")]
        offset: u32,
        #[serde(default)]
        theta: ThetaRule,
    },
    /// λ_k = 0 for k ≤ count: the classical Fourier filtration u_n = tⁿ.
    AllZeroPrefix { count: usize },
    /// An explicit finite list of zeros.
    Explicit {
        #[serde(with = "complex_vec_serde")]
        zeros: Vec<Complex64>,
    },
}

/// Serializes complex zeros as `{"re": …, "im": …}` objects, which is the
/// config-file form; `num-complex`'s default tuple form is kept off the wire.
mod complex_vec_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Pair {
        #[serde(default)]
        re: f64,
        #[serde(default)]
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<Pair> = v.iter().map(|z| Pair { re: z.re, im: z.im }).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<Pair>::deserialize(d)?;
        Ok(pairs.into_iter().map(|p| Complex64::new(p.re, p.im)).collect())
    }
}

fn default_offset() -> u32 {
    1
}

impl ZeroFamily {
    /// Produces the k-th zero (k is 1-based), or an error when the family is
    /// finite and exhausted or the gap underflows.
    pub fn zero(&self, k: usize) -> Result<Zero> {
        match self {
            ZeroFamily::GeometricRadius { ratio, theta } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return domain(format!("geometric-radius ratio must lie in (0,1), got {ratio}"));
                }
                let gap = ratio.powi(k as i32);
                if gap <= 0.0 {
                    return domain(format!(
                        "geometric-radius gap underflowed at k = {k} (ratio {ratio})"
                    ));
                }
                Zero::from_gap_phase(gap, theta.theta(k))
            }
            ZeroFamily::HarmonicRadius { offset, theta } => {
                let gap = 1.0 / (k as f64 + *offset as f64);
                Zero::from_gap_phase(gap, theta.theta(k))
            }
            ZeroFamily::AllZeroPrefix { count } => {
                if k > *count {
                    domain(format!("all-zero-prefix family has only {count} zeros, asked for {k}"))
                } else {
                    Ok(Zero::origin())
                }
            }
            ZeroFamily::Explicit { zeros } => match zeros.get(k - 1) {
                Some(&z) => Zero::from_complex(z),
                None => domain(format!("explicit family has only {} zeros, asked for {k}", zeros.len())),
            },
        }
    }

    /// Number of zeros the family can produce, if finite.
    pub fn count(&self) -> Option<usize> {
        match self {
            ZeroFamily::AllZeroPrefix { count } => Some(*count),
            ZeroFamily::Explicit { zeros } => Some(zeros.len()),
            _ => None,
        }
    }

    /// Analytic verdict of the Blaschke condition for the full family.
    pub fn verdict(&self) -> Verdict {
        match self {
            ZeroFamily::GeometricRadius { .. } => Verdict::Converging,
            ZeroFamily::HarmonicRadius { .. } => Verdict::Diverging,
            ZeroFamily::AllZeroPrefix { .. } | ZeroFamily::Explicit { .. } => Verdict::Converging,
        }
    }

    /// The analytic boundary cluster set of the zeros, when known and finite.
    ///
    /// Finite families have empty boundary cluster (their product extends
    /// analytically across the circle); radius rules cluster at the closure
    /// of their phase set.
    pub fn analytic_cluster(&self) -> Option<Vec<Complex64>> {
        match self {
            ZeroFamily::AllZeroPrefix { .. } | ZeroFamily::Explicit { .. } => Some(Vec::new()),
            ZeroFamily::GeometricRadius { theta, .. } | ZeroFamily::HarmonicRadius { theta, .. } => theta
                .phase_cluster()
                .map(|ps| ps.into_iter().map(|p| Complex64::from_polar(1.0, p)).collect()),
        }
    }

    /// Short machine name of the family kind.
    pub fn name(&self) -> &'static str {
        match self {
            ZeroFamily::GeometricRadius { .. } => "geometric-radius",
            ZeroFamily::HarmonicRadius { .. } => "harmonic-radius",
            ZeroFamily::AllZeroPrefix { .. } => "all-zero-prefix",
            ZeroFamily::Explicit { .. } => "explicit",
        }
    }
}

/// One catalog entry for the CLI `list-families` verb.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyCatalogEntry {
    /// Machine name of the family.
    pub name: &'static str,
    /// Human description of the rule and its parameters.
    pub parameters: &'static str,
    /// Analytic Blaschke-condition verdict.
    pub verdict: Verdict,
    /// Description of the boundary cluster set.
    pub cluster: &'static str,
    /// A ready-to-validate JSON snippet for the `family` config field.
    pub example: &'static str,
}

/// The built-in family catalog.
pub fn catalog() -> Vec<FamilyCatalogEntry> {
    vec![
        FamilyCatalogEntry {
            name: "geometric-radius",
            parameters: "ratio in (0,1); theta rule (constant | arithmetic | roots-of-unity); λ_k = (1 − ratio^k)e^{iθ_k}",
            verdict: Verdict::Converging,
            cluster: "closure of the phase set (finite for constant / roots-of-unity rules)",
            example: r#"{"kind":"geometric-radius","ratio":0.5,"theta":{"kind":"constant","value":0.0}}"#,
        },
        FamilyCatalogEntry {
            name: "harmonic-radius",
            parameters: "offset ≥ 0; theta rule; λ_k = (1 − 1/(k+offset))e^{iθ_k}",
            verdict: Verdict::Diverging,
            cluster: "closure of the phase set",
            example: r#"{"kind":"harmonic-radius","offset":1,"theta":{"kind":"constant","value":0.0}}"#,
        },
        FamilyCatalogEntry {
            name: "all-zero-prefix",
            parameters: "count ≥ 1; λ_k = 0 for k ≤ count (classical Fourier filtration)",
            verdict: Verdict::Converging,
            cluster: "empty (finite product)",
            example: r#"{"kind":"all-zero-prefix","count":16}"#,
        },
        FamilyCatalogEntry {
            name: "explicit",
            parameters: "finite list of complex zeros with |λ| < 1 − 1e−12",
            verdict: Verdict::Converging,
            cluster: "empty (finite product)",
            example: r#"{"kind":"explicit","zeros":[{"re":0.3,"im":0.0},{"re":0.0,"im":0.5}]}"#,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_family_gaps_are_exact_powers() {
        let fam = ZeroFamily::GeometricRadius { ratio: 0.5, theta: ThetaRule::default() };
        for k in 1..=80 {
            let z = fam.zero(k).unwrap();
            assert_eq!(z.gap(), 0.5f64.powi(k as i32));
            assert_eq!(z.phase(), 0.0);
        }
    }

    #[test]
    fn harmonic_family_matches_example_rule() {
        // offset 1 gives λ_k = 1 − 1/(k+1).
        let fam = ZeroFamily::HarmonicRadius { offset: 1, theta: ThetaRule::default() };
        let z1 = fam.zero(1).unwrap();
        assert!((z1.modulus() - 0.5).abs() < 1e-15);
        assert_eq!(fam.verdict(), Verdict::Diverging);
    }

    #[test]
    fn finite_families_are_exhaustible() {
        let fam = ZeroFamily::AllZeroPrefix { count: 3 };
        assert!(fam.zero(3).is_ok());
        assert!(fam.zero(4).is_err());
        let ex = ZeroFamily::Explicit { zeros: vec![Complex64::new(0.5, 0.0)] };
        assert!(ex.zero(1).is_ok());
        assert!(ex.zero(2).is_err());
    }

    #[test]
    fn roots_of_unity_phases_cycle() {
        let t = ThetaRule::RootsOfUnity { order: 3 };
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        assert!((t.theta(1) - tau).abs() < 1e-15);
        assert!((t.theta(2) - 2.0 * tau).abs() < 1e-15);
        assert!((t.theta(3) - 0.0).abs() < 1e-15);
        assert!((t.theta(4) - tau).abs() < 1e-15);
    }

    #[test]
    fn catalog_entries_deserialize() {
        for entry in catalog() {
            let fam: ZeroFamily = serde_json::from_str(entry.example).unwrap();
            assert_eq!(fam.name(), entry.name);
            assert_eq!(fam.verdict(), entry.verdict);
        }
    }
}
