//! Closed-form assembly of the truncated shift and of truncated Toeplitz
//! operators with Laurent-polynomial symbols.
//!
//! The compressed shift S = P_{uₙ} M_z |_{K²_{uₙ}} has an explicit lower
//! triangular matrix in the Takenaka–Malmquist basis, obtained by residue
//! calculus; every ingredient is evaluated through the cancellation-free
//! boundary-gap operations, so the matrix stays accurate for zeros
//! exponentially close to the circle where quadrature and coefficient-window
//! routes break down. Laurent symbols then assemble exactly through the
//! H∞ functional calculus: T_u(z^d) = S^d and T_u(conj(a)) = T_u(a)*.

use num_complex::Complex64;

use crate::blaschke::{BlaschkeProduct, Zero};
use crate::error::Result;
use crate::hardy::{BasisTag, LaurentPoly};
use crate::jet::Jet;
use crate::linalg::CMatrix;
use crate::model_space::TTOMatrix;

/// Order of the local expansion used for the difference quotient when the
/// column zero sits near the origin.
const SMALL_LAMBDA_JET: usize = 12;
/// Below this modulus the difference quotient (g(λ)−g(0))/λ switches to the
/// Taylor expansion of g; the crossover keeps both branches at full accuracy.
const SMALL_LAMBDA: f64 = 1e-3;

/// Matrix of the truncated shift S_{uₙ} in the Takenaka–Malmquist basis.
///
/// Entries: S[k,k] = λ_k, S[j,k] = 0 for j < k, and for j > k
///
/// ```text
/// S[j,k] = conj( s_k · (g(λ_k) − g(0)) / λ_k ),
/// g(t) = s_j · Π_{i=k..j−1} b_{λ_i}(t) / (1 − conj(λ_j)·t),
/// ```
///
/// with the difference quotient replaced by the Taylor expansion of g when
/// |λ_k| is small (including the exact λ_k = 0 case, where it equals g'(0)).
pub fn compressed_shift(zeros: &[Zero]) -> CMatrix {
    let n = zeros.len();
    let mut s = CMatrix::zeros(n, n);
    for k in 0..n {
        s[(k, k)] = zeros[k].value();
        for j in k + 1..n {
            s[(j, k)] = shift_entry(zeros, j, k);
        }
    }
    s
}

fn shift_entry(zeros: &[Zero], j: usize, k: usize) -> Complex64 {
    let zk = &zeros[k];
    let zj = &zeros[j];
    let sj = Complex64::new(zj.s(), 0.0);
    let a = if zk.modulus() < SMALL_LAMBDA {
        // g as a short jet: s_j · Π b_i / (1 − conj(λ_j) t), then the
        // difference quotient is Σ_{m≥1} ĝ(m)·λ_k^{m−1} by Horner.
        let mut g = Jet::constant(sj, SMALL_LAMBDA_JET);
        for z in &zeros[k..j] {
            g = z.apply_factor(&g);
        }
        let g = g.div_one_minus(zj.conj().value());
        let lam = zk.value();
        let mut acc = Complex64::new(0.0, 0.0);
        for m in (1..SMALL_LAMBDA_JET).rev() {
            acc = acc * lam + g.coeff(m);
        }
        Complex64::new(zk.s(), 0.0) * acc
    } else {
        // Stable direct evaluation away from the origin.
        let mut prod_at_lam = Complex64::new(1.0, 0.0);
        let mut prod_at_zero = Complex64::new(1.0, 0.0);
        for z in &zeros[k..j] {
            prod_at_lam *= z.factor_at_zero(zk);
            prod_at_zero *= if z.is_origin() { Complex64::new(0.0, 0.0) } else { Complex64::new(z.modulus(), 0.0) };
        }
        let g_at_lam = sj * prod_at_lam / zj.one_minus_conj_mul(zk);
        let g_at_zero = sj * prod_at_zero;
        Complex64::new(zk.s(), 0.0) * (g_at_lam - g_at_zero) / zk.value()
    };
    a.conj()
}

/// Lower-triangular-aware product C = A·B summed in ascending contraction
/// order, so powers of nested shift matrices stay bitwise-nested.
fn tri_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut out = CMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..=j {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in k..=j {
                acc += a[(j, l)] * b[(l, k)];
            }
            out[(j, k)] = acc;
        }
    }
    out
}

/// T_u(a) for a Laurent-polynomial symbol via the functional calculus:
/// analytic monomials map to powers of the compressed shift, co-analytic
/// ones to powers of its adjoint, and the assembly is exact (no window).
pub fn tto_laurent(u: &BlaschkeProduct, n: usize, a: &LaurentPoly) -> Result<TTOMatrix> {
    let zeros = u.prefix(n)?;
    let s = compressed_shift(zeros);
    let (lo, hi) = a.degree_range();
    let max_pow = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
    // power[d] = S^d, built once and shared by both symbol halves.
    let mut powers: Vec<CMatrix> = Vec::with_capacity(max_pow + 1);
    powers.push(CMatrix::identity(n, n));
    for _ in 0..max_pow {
        powers.push(tri_mul(powers.last().unwrap(), &s));
    }
    let mut entries = CMatrix::zeros(n, n);
    for (&d, &c) in a.iter() {
        if d >= 0 {
            entries += &powers[d as usize] * c;
        } else {
            entries += powers[(-d) as usize].adjoint() * c;
        }
    }
    Ok(TTOMatrix {
        entries,
        symbol_tag: format!("laurent[{lo}..={hi}]"),
        basis: BasisTag::Tm { n },
        truncation_flag: false,
    })
}

/// Evaluates the full Blaschke product at the compressed shift:
/// uₙ(S_{uₙ}) = Π b_{λ_i}(S) with b_λ(S) = phase·(λI − S)(I − conj(λ)S)⁻¹.
///
/// The result is the zero matrix in exact arithmetic; its norm is a sharp
/// consistency check of the closed form at any zero modulus.
pub fn blaschke_of_shift(zeros: &[Zero]) -> Result<CMatrix> {
    let n = zeros.len();
    let s = compressed_shift(zeros);
    let id = CMatrix::identity(n, n);
    let mut acc = id.clone();
    for z in zeros {
        let num = &id * z.value() - &s;
        let den = &id - &s * z.conj().value();
        let solved = den
            .lu()
            .solve(&num)
            .ok_or_else(|| crate::Error::Domain("shift factor solve failed".into()))?;
        acc = acc * solved * (-z.phase_factor());
    }
    Ok(acc)
}

/// Taylor-coefficient columns of R_{uₙ}* e_k, the images of the basis under
/// the adjoint Hankel operator R* = H(conj(ũₙ)).
///
/// These are analytic with the closed form
///
/// ```text
/// (R* e_k)(t) = −s_k · conj(phase_k) · Π_{i=k+1..n−1} b_{conj(λ_i)}(t) / (1 − λ_k t),
/// ```
///
/// evaluated as jets of length `len` (`phase_k` = |λ_k|/λ_k, −1 at the origin).
pub(crate) fn adjoint_image_columns(zeros: &[Zero], len: usize) -> CMatrix {
    let n = zeros.len();
    let refl: Vec<Zero> = zeros.iter().map(Zero::conj).collect();
    let mut out = CMatrix::zeros(len, n);
    // Build suffix products right-to-left so each column costs one factor.
    let mut suffix = Jet::constant(Complex64::new(1.0, 0.0), len);
    for k in (0..n).rev() {
        let zk = &zeros[k];
        let scale = -Complex64::new(zk.s(), 0.0) * zk.phase_factor().conj();
        let col = suffix.clone().scale(scale).div_one_minus(zk.value());
        for (m, &c) in col.coeffs().iter().enumerate() {
            out[(m, k)] = c;
        }
        suffix = refl[k].apply_factor(&suffix);
    }
    out
}
