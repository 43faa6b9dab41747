//! Model spaces K²_{uₙ} = H² ⊖ uₙH²: orthonormal Takenaka–Malmquist bases,
//! projection matrices, truncated-Toeplitz-operator assembly, and the
//! Hankel-type operators R_{uₙ} with their convergence probes.
//!
//! For zeros λ_0, …, λ_{n−1} the Takenaka–Malmquist basis of K²_{uₙ} is
//!
//! ```text
//! e_k(z) = sqrt(1−|λ_k|²)/(1 − conj(λ_k)z) · Π_{j<k} b_{λ_j}(z),
//! ```
//!
//! which makes the filtration K²_{u_m} ⊂ K²_{uₙ} literal: the first m basis
//! functions of the order-n space are exactly the order-m basis. R_{uₙ} is the
//! classical Hankel operator H(uₙ); its key identities R R* = P_{uₙ} and
//! R*R = P for the reflected product are verified on Fourier windows here.

pub mod shift;

use num_complex::Complex64;

use crate::blaschke::{BlaschkeProduct, Zero};
use crate::error::{domain, resolution, Result};
use crate::hardy::{analytic_sandwich, hankel_product_adj, BasisTag, OperatorMatrix, Symbol};
use crate::jet::Jet;
use crate::linalg::{self, CMatrix, CVector};

/// Hard cap of the adequacy loop on the coefficient window.
const N_F_CAP: usize = 1 << 14;
/// Target for Gram residual and coefficient tail in the strict constructor.
const ADEQUACY_TOL: f64 = 1e-10;

/// Orthonormal Takenaka–Malmquist basis of K²_{uₙ} with its coefficient
/// embedding and circle samples.
#[derive(Clone, Debug)]
pub struct TMBasis {
    zeros: Vec<Zero>,
    n: usize,
    n_f: usize,
    grid: crate::hardy::CircleGrid,
    /// N_F × n matrix; column k holds the Taylor coefficients of e_k.
    coeffs: CMatrix,
    /// M × n matrix; column k holds e_k at the grid points.
    samples: CMatrix,
    gram_residual: f64,
    tail: f64,
}

impl TMBasis {
    /// Dimension n of the model space.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coefficient window length N_F.
    pub fn n_f(&self) -> usize {
        self.n_f
    }

    /// The grid carrying the samples.
    pub fn grid(&self) -> &crate::hardy::CircleGrid {
        &self.grid
    }

    /// The zeros defining the space.
    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    /// The N_F × n coefficient embedding E (columns = basis functions).
    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    /// The M × n sample matrix.
    pub fn samples(&self) -> &CMatrix {
        &self.samples
    }

    /// Frobenius norm of EᴴE − I (orthonormality defect from truncation).
    pub fn gram_residual(&self) -> f64 {
        self.gram_residual
    }

    /// Largest per-column L² tail sqrt(1 − ‖column‖²); exact because each
    /// basis function has unit norm.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// Max over columns of ‖P(conj(uₙ)·e_k)‖ computed from the coefficient
    /// window: a direct membership check of e_k ∈ K²_{uₙ} = ker(P M_{conj(uₙ)}).
    pub fn membership_residual(&self) -> f64 {
        let u_hat = crate::blaschke::product_jet(&self.zeros, self.n_f);
        let u = u_hat.coeffs();
        let mut worst: f64 = 0.0;
        for k in 0..self.n {
            let mut acc = 0.0;
            for d in 0..self.n_f {
                let mut c = Complex64::new(0.0, 0.0);
                for j in 0..self.n_f - d {
                    c += u[j].conj() * self.coeffs[(j + d, k)];
                }
                acc += c.norm_sqr();
            }
            worst = worst.max(acc.sqrt());
        }
        worst
    }
}

/// Taylor-coefficient columns (length `len`) of the first `n` basis functions.
///
/// Shared by the basis constructors and the closed-form operator assembly;
/// every step uses the cancellation-free factor operations, so the columns
/// stay accurate for zeros arbitrarily close to the circle.
pub(crate) fn tm_coefficient_columns(zeros: &[Zero], len: usize) -> CMatrix {
    let n = zeros.len();
    let mut cols = CMatrix::zeros(len, n);
    let mut b = Jet::constant(Complex64::new(1.0, 0.0), len);
    for (k, z) in zeros.iter().enumerate() {
        let col = b.div_one_minus(z.conj().value()).scale(Complex64::new(z.s(), 0.0));
        for (m, &c) in col.coeffs().iter().enumerate() {
            cols[(m, k)] = c;
        }
        b = z.apply_factor(&b);
    }
    cols
}

/// Circle samples of the first `n` basis functions on a grid.
fn tm_sample_columns(zeros: &[Zero], grid: &crate::hardy::CircleGrid) -> CMatrix {
    let (m, n) = (grid.len(), zeros.len());
    let mut out = CMatrix::zeros(m, n);
    for i in 0..m {
        let theta = grid.phase(i);
        let mut acc = Complex64::new(1.0, 0.0);
        for (k, z) in zeros.iter().enumerate() {
            out[(i, k)] = acc * z.s() / z.one_minus_conj_point(theta);
            acc *= z.factor_at_circle(theta);
        }
    }
    out
}

/// Tail ‖coefficients beyond the window‖ of a unit-norm analytic function
/// whose coefficients decay like rho^m (rational with poles beyond 1/rho).
///
/// The norm deficit 1 − Σ|c_m|² is exact in exact arithmetic but floors near
/// machine epsilon, so once it drops below that floor the estimate switches
/// to a geometric extrapolation of the mass in the last half-window.
pub(crate) fn unit_tail_estimate(coeffs: &[Complex64], rho: f64) -> f64 {
    let sum: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let deficit = 1.0 - sum;
    if deficit > 1e-12 {
        return deficit.sqrt();
    }
    let b = (coeffs.len() / 2).max(1);
    let block: f64 = coeffs[coeffs.len() - b..].iter().map(|c| c.norm_sqr()).sum();
    let q = rho.powi(2 * b as i32);
    let extrap = if 1.0 - q <= f64::EPSILON { 1.0 } else { 4.0 * (block * q / (1.0 - q)).sqrt() };
    // The deficit branch already certified a tail below ~1.5e−6.
    extrap.min(2e-6)
}

fn gram_and_tail(coeffs: &CMatrix, zeros: &[Zero]) -> (f64, f64) {
    let n = coeffs.ncols();
    let gram = coeffs.adjoint() * coeffs;
    let defect = &gram - CMatrix::identity(n, n);
    let rho = zeros.iter().map(Zero::modulus).fold(0.0, f64::max);
    let mut tail: f64 = 0.0;
    for k in 0..n {
        let col: Vec<Complex64> = coeffs.column(k).iter().copied().collect();
        tail = tail.max(unit_tail_estimate(&col, rho));
    }
    (linalg::frobenius(&defect), tail)
}

fn assemble_basis(u: &BlaschkeProduct, n: usize, n_f: usize) -> Result<TMBasis> {
    let zeros = u.prefix(n)?.to_vec();
    let grid = crate::hardy::CircleGrid::adequate_for(n_f)?;
    let coeffs = tm_coefficient_columns(&zeros, n_f);
    let (gram_residual, tail) = gram_and_tail(&coeffs, &zeros);
    let samples = tm_sample_columns(&zeros, &grid);
    Ok(TMBasis { zeros, n, n_f, grid, coeffs, samples, gram_residual, tail })
}

/// Builds the basis at the requested window without adequacy enforcement;
/// `gram_residual` and `tail` report how far the truncation actually got.
pub fn tm_basis_raw(u: &BlaschkeProduct, n: usize, n_f: usize) -> Result<TMBasis> {
    if n == 0 || n_f == 0 {
        return domain("basis needs n ≥ 1 and N_F ≥ 1");
    }
    assemble_basis(u, n, n_f)
}

/// Builds the basis, doubling the coefficient window (and with it the grid)
/// until both the Gram residual and the per-column tail drop below 1e−10.
///
/// Fails with a resolution error at the 2¹⁴ window cap; the error names the
/// offending zero modulus, since the coefficient decay degrades like |λ|^m.
pub fn tm_basis(u: &BlaschkeProduct, n: usize, n_f: usize) -> Result<TMBasis> {
    if n == 0 {
        return domain("basis needs n ≥ 1");
    }
    let mut w = n_f.max(8).next_power_of_two();
    loop {
        let basis = assemble_basis(u, n, w)?;
        if basis.gram_residual < ADEQUACY_TOL && basis.tail < ADEQUACY_TOL {
            return Ok(basis);
        }
        if w >= N_F_CAP {
            let min_gap = basis.zeros.iter().map(Zero::gap).fold(f64::INFINITY, f64::min);
            return resolution(format!(
                "basis did not reach Gram/tail tolerance {ADEQUACY_TOL} within the \
                 window cap {N_F_CAP} (max |λ| = 1 − {min_gap:.3e}); use the \
                 closed-form operator routes for such zeros"
            ));
        }
        w *= 2;
    }
}

/// P_{uₙ} = E·Eᴴ on the N_F Fourier window.
pub fn projection_matrix(basis: &TMBasis) -> OperatorMatrix {
    let entries = basis.coeffs() * basis.coeffs().adjoint();
    OperatorMatrix {
        entries,
        row_basis: BasisTag::Fourier { len: basis.n_f() },
        col_basis: BasisTag::Fourier { len: basis.n_f() },
        truncation_flag: basis.tail() > ADEQUACY_TOL,
    }
}

/// The N_F-window compression of P_{uₙ} assembled from the alternative
/// formula P − M_{uₙ}PM_{conj(uₙ)} (independent of the basis).
pub fn projection_matrix_from_product(u: &BlaschkeProduct, n: usize, n_f: usize) -> Result<OperatorMatrix> {
    let u_hat = u.partial_product_jet(n, n_f)?;
    let sandwich = analytic_sandwich(u_hat.coeffs(), u_hat.coeffs(), n_f);
    let entries = CMatrix::identity(n_f, n_f) - sandwich;
    let rho = u.prefix(n)?.iter().map(Zero::modulus).fold(0.0, f64::max);
    Ok(OperatorMatrix {
        entries,
        row_basis: BasisTag::Fourier { len: n_f },
        col_basis: BasisTag::Fourier { len: n_f },
        truncation_flag: unit_tail_estimate(u_hat.coeffs(), rho) > ADEQUACY_TOL,
    })
}

/// Matrix of a truncated Toeplitz operator in TM coordinates.
#[derive(Clone, Debug)]
pub struct TTOMatrix {
    /// The n×n entries ⟨T e_k, e_j⟩.
    pub entries: CMatrix,
    /// Human-readable symbol description.
    pub symbol_tag: String,
    /// Basis of both indices.
    pub basis: BasisTag,
    /// Set when quadrature/window truncation may dominate.
    pub truncation_flag: bool,
}

fn symbol_tag_of(a: &Symbol) -> String {
    match a.exact_laurent() {
        Some(p) => {
            let (lo, hi) = p.degree_range();
            format!("laurent[{lo}..={hi}]")
        }
        None => format!("sampled(M={})", a.grid().len()),
    }
}

/// The finite section P_{uₙ}T_u(a)P_{uₙ} in TM coordinates, by quadrature:
/// entries [j,k] = (1/M)·Σ_m a(t_m)·e_k(t_m)·conj(e_j(t_m)).
///
/// The contraction is summed in ascending grid order, so sections built from
/// one basis at one resolution are bit-reproducible and nested sections are
/// exact leading principal submatrices.
pub fn tto_on_basis(basis: &TMBasis, a: &Symbol) -> Result<TTOMatrix> {
    let m = basis.grid().len();
    if a.grid().len() != m {
        return domain(format!(
            "symbol grid ({}) must match the basis grid ({m}); resample the symbol",
            a.grid().len()
        ));
    }
    let n = basis.dim();
    let s = basis.samples();
    let w = a.samples();
    let scale = 1.0 / m as f64;
    let mut entries = CMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..m {
                acc += s[(i, j)].conj() * w[i] * s[(i, k)];
            }
            entries[(j, k)] = acc * scale;
        }
    }
    Ok(TTOMatrix {
        entries,
        symbol_tag: symbol_tag_of(a),
        basis: BasisTag::Tm { n },
        truncation_flag: basis.tail() > ADEQUACY_TOL || a.tail_bound() > 1e-12,
    })
}

/// Convenience wrapper: builds the strict basis, resamples coefficient-exact
/// symbols onto its grid, and assembles the section by quadrature.
pub fn tto_matrix(u: &BlaschkeProduct, n: usize, a: &Symbol, n_f: usize) -> Result<TTOMatrix> {
    let basis = tm_basis(u, n, n_f)?;
    if a.grid().len() == basis.grid().len() {
        return tto_on_basis(&basis, a);
    }
    match a.exact_laurent() {
        Some(p) => {
            let resampled = Symbol::from_laurent(p, basis.grid().clone(), basis.n_f() - 1)?;
            tto_on_basis(&basis, &resampled)
        }
        None => domain(format!(
            "sampled symbol lives on a {}-point grid but the basis needed {}; \
             re-analyze the symbol on the finer grid",
            a.grid().len(),
            basis.grid().len()
        )),
    }
}

/// R_{uₙ} = P_{uₙ}M_{uₙ}J on the N_F Fourier window: the Hankel matrix of the
/// partial product, entries [j,k] = coefficient of uₙ at j+k+1.
///
/// The truncation flag reports the exact coefficient tail
/// sqrt(1 − Σ_{m<2N_F}|ûₙ(m)|²) of the unimodular symbol.
pub fn r_matrix(u: &BlaschkeProduct, n: usize, n_f: usize) -> Result<OperatorMatrix> {
    let jet = u.partial_product_jet(n, 2 * n_f)?;
    let c = jet.coeffs();
    let entries = CMatrix::from_fn(n_f, n_f, |j, k| c[j + k + 1]);
    let rho = u.prefix(n)?.iter().map(Zero::modulus).fold(0.0, f64::max);
    Ok(OperatorMatrix {
        entries,
        row_basis: BasisTag::Fourier { len: n_f },
        col_basis: BasisTag::Fourier { len: n_f },
        truncation_flag: unit_tail_estimate(c, rho) > 1e-10,
    })
}

/// Partial-isometry residuals for the stage-`n` product through exact
/// coefficient jets: `res1 = ‖R R* − Pₙ‖` and `res2 = ‖R*R − P̃ₙ‖`, where
/// `P̃ₙ` projects onto the model space of the reflected product (zeros
/// conjugated).  Both sides are assembled by O(N_F²) window recurrences from
/// the exact jets, so the residuals measure window truncation only and halve
/// (at least) when `N_F` doubles once the window resolves the coefficients.
pub fn r_partial_isometry_check(
    u: &BlaschkeProduct,
    n: usize,
    n_f: usize,
) -> Result<IsometryReport> {
    if n_f == 0 {
        return domain("isometry check needs N_F ≥ 1");
    }
    let rho = u.prefix(n)?.iter().map(Zero::modulus).fold(0.0, f64::max);
    let jet = u.partial_product_jet(n, 2 * n_f)?;
    let direct = hankel_product_adj(jet.coeffs(), jet.coeffs(), n_f)
        + analytic_sandwich(jet.coeffs(), jet.coeffs(), n_f)
        - CMatrix::identity(n_f, n_f);
    let refl = u.reflect();
    let rjet = refl.partial_product_jet(n, 2 * n_f)?;
    let adjoint = hankel_product_adj(rjet.coeffs(), rjet.coeffs(), n_f)
        + analytic_sandwich(rjet.coeffs(), rjet.coeffs(), n_f)
        - CMatrix::identity(n_f, n_f);
    let tail = unit_tail_estimate(jet.coeffs(), rho).max(unit_tail_estimate(rjet.coeffs(), rho));
    Ok(IsometryReport {
        res1: linalg::spectral_norm(&direct),
        res2: linalg::spectral_norm(&adjoint),
        truncation_flag: tail > 1e-10,
    })
}

/// Residuals of the partial-isometry identities of a Hankel operator with
/// inner symbol.
#[derive(Clone, Copy, Debug)]
pub struct IsometryReport {
    /// ‖H(v)H(v)* − (P − vPconj(v))‖ on the window.
    pub res1: f64,
    /// ‖H(v)*H(v) − (P − conj(ṽ)Pṽ)‖ on the window.
    pub res2: f64,
    /// Set when the symbol's coefficient window cannot cover 2·N_F modes.
    pub truncation_flag: bool,
}

/// Checks the partial-isometry identities H(v)H(v)* = P − vPconj(v) and
/// H(v)*H(v) = P − conj(ṽ)Pṽ on the N_F window for an inner symbol v.
///
/// Rejects symbols that are not unimodular on the grid or not analytic
/// (negative-coefficient mass), since the identities require an inner v.
pub fn hankel_isometry_check(v: &Symbol, n_f: usize) -> Result<IsometryReport> {
    if n_f == 0 {
        return domain("isometry check needs N_F ≥ 1");
    }
    let unimod = v.samples().iter().map(|s| (s.norm() - 1.0).abs()).fold(0.0, f64::max);
    if unimod > 1e-10 {
        return domain(format!("symbol is not unimodular on the grid (deviation {unimod:.3e})"));
    }
    let neg = (1..=v.n_f() as i64).map(|j| v.coeff(-j).norm_sqr()).sum::<f64>().sqrt();
    if neg > 1e-8 {
        return domain(format!("symbol is not analytic (negative-coefficient mass {neg:.3e})"));
    }
    let len = 2 * n_f;
    let coeffs: Vec<Complex64> = (0..len as i64).map(|j| v.coeff(j)).collect();
    let truncation_flag = v.n_f() + 1 < len;
    let res1 = {
        let lhs = hankel_product_adj(&coeffs, &coeffs, n_f);
        let rhs = CMatrix::identity(n_f, n_f) - analytic_sandwich(&coeffs, &coeffs, n_f);
        linalg::spectral_norm(&(lhs - rhs))
    };
    // Second identity through the reflected symbol w = conj(ṽ), whose
    // coefficients are conj(v̂(m)): H(v)*H(v) = H(w)H(w)* and
    // P − conj(ṽ)Pṽ = P − wPconj(w).
    let refl: Vec<Complex64> = coeffs.iter().map(|c| c.conj()).collect();
    let res2 = {
        let lhs = hankel_product_adj(&refl, &refl, n_f);
        let rhs = CMatrix::identity(n_f, n_f) - analytic_sandwich(&refl, &refl, n_f);
        linalg::spectral_norm(&(lhs - rhs))
    };
    Ok(IsometryReport { res1, res2, truncation_flag })
}

/// Which strong-convergence statement the probe exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMode {
    /// ‖(R_{uₙ} − H(u_big))x‖.
    Direct,
    /// ‖(R_{uₙ}* − H(u_big)*)x‖.
    Adjoint,
    /// ‖(P_n − P_big)x‖ for the projections onto the reflected model spaces.
    ReflectedProjection,
}

/// ⟨H(u_m)x, H(u_l)y⟩ computed exactly from coefficient jets.
///
/// Writing c = u_m·conj(u_l) on the circle (a Blaschke quotient, analytic for
/// m ≥ l, co-analytic for m ≤ l), the semi-infinite Hankel product contracts
/// to the finite corner formula
///
/// ```text
/// ⟨H(u_m)x, H(u_l)y⟩ = Σ_{k,k'} x_k·conj(y_{k'})·
///     [ ĉ(k−k') − Σ_{i=0}^{min(k,k')} û_m(k−i)·conj(û_l(k'−i)) ],
/// ```
///
/// which involves only jets of length max(|x|,|y|) — no window truncation.
fn hankel_gram(zeros: &[Zero], m: usize, l: usize, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let kmax = x.len().max(y.len());
    let um = crate::blaschke::product_jet(&zeros[..m], kmax);
    let ul = crate::blaschke::product_jet(&zeros[..l], kmax);
    let (quot, flip) =
        if m >= l { (crate::blaschke::product_jet(&zeros[l..m], kmax), false) } else { (crate::blaschke::product_jet(&zeros[m..l], kmax), true) };
    let c_hat = |d: i64| -> Complex64 {
        if flip {
            if d <= 0 { quot.coeff((-d) as usize).conj() } else { Complex64::new(0.0, 0.0) }
        } else if d >= 0 {
            quot.coeff(d as usize)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &xv) in x.iter().enumerate() {
        if xv == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (kp, &yv) in y.iter().enumerate() {
            let mut s = c_hat(k as i64 - kp as i64);
            for i in 0..=k.min(kp) {
                s -= um.coeff(k - i) * ul.coeff(kp - i).conj();
            }
            acc += xv * yv.conj() * s;
        }
    }
    acc
}

/// ‖P(conj(w)·x)‖² for an analytic w given by `zeros`, exact from jets:
/// the d-th analytic coefficient of conj(w)x is Σ_j conj(ŵ(j))·x_{j+d}.
fn projected_conj_mul_norm_sqr(zeros: &[Zero], x: &[Complex64]) -> f64 {
    let w = crate::blaschke::product_jet(zeros, x.len());
    let mut acc = 0.0;
    for d in 0..x.len() {
        let mut c = Complex64::new(0.0, 0.0);
        for j in 0..x.len() - d {
            c += w.coeff(j).conj() * x[j + d];
        }
        acc += c.norm_sqr();
    }
    acc
}

/// Probes the strong convergence R_{uₙ} → H(u) on a fixed vector, using the
/// final materialized order of `u` as the stand-in for the full product.
///
/// All three modes evaluate closed-form Gram identities on coefficient jets,
/// so the values are exact (no window truncation) for zeros arbitrarily close
/// to the circle. The window-matrix route [`r_convergence_probe_window`] is
/// kept as an independent oracle for moderate zeros.
pub fn r_convergence_probe(
    u: &BlaschkeProduct,
    x: &[Complex64],
    n_list: &[usize],
    n_f: usize,
    mode: ProbeMode,
) -> Result<Vec<f64>> {
    if x.is_empty() || x.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
        return domain("probe vector must be nonzero");
    }
    if x.len() > n_f {
        return domain(format!("probe vector support {} exceeds the window N_F = {n_f}", x.len()));
    }
    let big = u.len();
    let zeros = u.zeros();
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n == 0 || n > big {
            return domain(format!("probe order n = {n} outside the materialized range 1..={big}"));
        }
        let val_sqr = match mode {
            ProbeMode::Direct => {
                let gnn = hankel_gram(zeros, n, n, x, x);
                let gbb = hankel_gram(zeros, big, big, x, x);
                let gbn = hankel_gram(zeros, big, n, x, x);
                gnn.re + gbb.re - 2.0 * gbn.re
            }
            ProbeMode::Adjoint => {
                // ⟨H(u_m)*x, H(u_l)*x⟩ equals the direct-mode Gram evaluated
                // on the conjugated vector, since H* = conj(H) entrywise for
                // the symmetric Hankel matrices.
                let xc: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();
                let gnn = hankel_gram(zeros, n, n, &xc, &xc);
                let gbb = hankel_gram(zeros, big, big, &xc, &xc);
                let gbn = hankel_gram(zeros, big, n, &xc, &xc);
                gnn.re + gbb.re - 2.0 * gbn.re
            }
            ProbeMode::ReflectedProjection => {
                // Nested projections: ‖(P_big − P_n)x‖² = ‖P(conj(wₙ)x)‖² −
                // ‖P(conj(w_big)x)‖² with w the reflected partial products.
                let refl: Vec<Zero> = zeros.iter().map(Zero::conj).collect();
                projected_conj_mul_norm_sqr(&refl[..n], x) - projected_conj_mul_norm_sqr(&refl[..big], x)
            }
        };
        out.push(val_sqr.max(0.0).sqrt());
    }
    Ok(out)
}

/// Window-matrix route for the same probes: assembles R/adjoint/projection
/// matrices on the N_F Fourier window and applies them to x directly. Subject
/// to coefficient-window truncation; useful as an oracle at moderate zeros.
pub fn r_convergence_probe_window(
    u: &BlaschkeProduct,
    x: &[Complex64],
    n_list: &[usize],
    n_f: usize,
    mode: ProbeMode,
) -> Result<Vec<f64>> {
    if x.len() > n_f {
        return domain(format!("probe vector support {} exceeds the window N_F = {n_f}", x.len()));
    }
    let big = u.len();
    let mut xv = CVector::zeros(n_f);
    for (i, &v) in x.iter().enumerate() {
        xv[i] = v;
    }
    let big_mat = |order: usize| -> Result<CMatrix> {
        match mode {
            ProbeMode::Direct => Ok(r_matrix(u, order, n_f)?.entries),
            ProbeMode::Adjoint => Ok(r_matrix(u, order, n_f)?.entries.adjoint()),
            ProbeMode::ReflectedProjection => {
                Ok(projection_matrix_from_product(&u.reflect(), order, n_f)?.entries)
            }
        }
    };
    let reference = big_mat(big)?;
    let ref_x = &reference * &xv;
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let cur = big_mat(n)?;
        out.push((&cur * &xv - &ref_x).norm());
    }
    Ok(out)
}
