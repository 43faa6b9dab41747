//! Numerics on the unit circle and the Hardy space H²: uniform grids, discrete
//! Fourier analysis, the flip operator ã(t) = a(t⁻¹), and classical
//! Toeplitz/Hankel matrix assembly on truncated Fourier bases.
//!
//! Conventions. The H² Fourier basis is indexed 0..N−1. For a symbol `a` with
//! coefficients â(j):
//!
//! ```text
//! Toeplitz:  T(a)[j,k] = â(j−k)         Hankel:  H(a)[j,k] = â(j+k+1)
//! ```
//!
//! The Hankel index law comes from H(a) = P·a·J with (Jf)(t) = t⁻¹f(t⁻¹).
//! These satisfy the product identity
//!
//! ```text
//! T(ab) = T(a)T(b) + H(a)H(b̃),
//! ```
//!
//! whose compression to the first n modes of an N-dimensional window is
//! Widom's identity (all matrices N×N, Pₙ the coordinate projection, Rₙ the
//! rank-n Hankel of tⁿ):
//!
//! ```text
//! PₙT(ab)Pₙ = PₙT(a)PₙT(b)Pₙ + PₙH(a)H(b̃)Pₙ + RₙH(ã)H(b)Rₙ.
//! ```

use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{domain, resolution, Result};
use crate::linalg::{self, CMatrix};

/// Uniform grid of M points t_m = e^{2πim/M} with weights 1/M (the normalized
/// measure on the circle). Quadrature of t^j over the grid is exactly δ_{j,0}
/// for |j| < M.
#[derive(Clone, Debug)]
pub struct CircleGrid {
    m: usize,
    points: Vec<Complex64>,
}

impl CircleGrid {
    /// Builds a grid with `m ≥ 2` points.
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return domain(format!("circle grid needs at least 2 points, got {m}"));
        }
        let tau = 2.0 * std::f64::consts::PI;
        let points = (0..m).map(|k| Complex64::from_polar(1.0, tau * k as f64 / m as f64)).collect();
        Ok(CircleGrid { m, points })
    }

    /// Default grid for a coefficient window: 8·N_F rounded up to a power of two.
    pub fn adequate_for(n_f: usize) -> Result<Self> {
        CircleGrid::new((8 * n_f.max(1)).next_power_of_two())
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.m
    }

    /// True when the grid is empty (cannot happen by construction).
    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// The grid point e^{2πik/M}.
    pub fn point(&self, k: usize) -> Complex64 {
        self.points[k]
    }

    /// All grid points.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Phase of the k-th grid point.
    pub fn phase(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.m as f64
    }
}

/// A function on the circle represented by grid samples plus a finite window
/// of Fourier coefficients â(j), |j| ≤ N_F, and a tail estimate.
#[derive(Clone, Debug)]
pub struct Symbol {
    grid: CircleGrid,
    samples: Vec<Complex64>,
    n_f: usize,
    /// Coefficients stored at index j + n_f for −n_f ≤ j ≤ n_f.
    coeffs: Vec<Complex64>,
    tail_bound: f64,
    /// Exact Laurent coefficients, kept when the symbol was built from a
    /// coefficient map (enables exact algebraic routes downstream).
    exact: Option<LaurentPoly>,
}

impl Symbol {
    /// Discrete Fourier analysis of samples on a grid:
    /// â(j) = (1/M) Σ_m f(t_m) t_m^{−j}, kept for |j| ≤ N_F < M/2.
    pub fn analyze_samples(samples: Vec<Complex64>, grid: CircleGrid, n_f: usize) -> Result<Self> {
        if samples.len() != grid.len() {
            return domain(format!(
                "sample count {} does not match grid size {}",
                samples.len(),
                grid.len()
            ));
        }
        if 2 * n_f >= grid.len() {
            return resolution(format!(
                "aliasing: coefficient window N_F = {n_f} needs a grid with more than {} points, got {}",
                2 * n_f,
                grid.len()
            ));
        }
        let m = grid.len();
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(m);
        let mut buf = samples.clone();
        fft.process(&mut buf);
        // buf[k] = Σ_m f(t_m) e^{−2πikm/M} = M·â(k mod M).
        let scale = 1.0 / m as f64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n_f + 1];
        for j in -(n_f as i64)..=(n_f as i64) {
            let bin = j.rem_euclid(m as i64) as usize;
            coeffs[(j + n_f as i64) as usize] = buf[bin] * scale;
        }
        // Tail estimate: grid-residual of synthesis from the retained window,
        // plus the magnitude of the outermost coefficient band as a decay
        // indicator.
        let ifft = planner.plan_fft_inverse(m);
        let mut win = vec![Complex64::new(0.0, 0.0); m];
        for j in -(n_f as i64)..=(n_f as i64) {
            let bin = j.rem_euclid(m as i64) as usize;
            win[bin] = buf[bin];
        }
        ifft.process(&mut win);
        let mut resid: f64 = 0.0;
        for (w, s) in win.iter().zip(&samples) {
            resid = resid.max((w * scale - s).norm());
        }
        // Decay indicator: the outermost two coefficient bands. Content hiding
        // beyond the grid Nyquist frequency would show up here unless the
        // symbol decays, in which case the bands bound the tail's order.
        let mut edge: f64 = 0.0;
        for j in n_f.saturating_sub(1)..=n_f {
            edge = edge.max(coeffs[n_f + j].norm()).max(coeffs[n_f - j].norm());
        }
        let tail_bound = resid + edge;
        Ok(Symbol { grid, samples, n_f, coeffs, tail_bound, exact: None })
    }

    /// Analyzes a callable on the grid.
    pub fn analyze<F: Fn(Complex64) -> Complex64>(f: F, grid: CircleGrid, n_f: usize) -> Result<Self> {
        let samples = grid.points().iter().map(|&t| f(t)).collect();
        Symbol::analyze_samples(samples, grid, n_f)
    }

    /// Builds a symbol from an exact Laurent coefficient map. The window must
    /// accommodate every coefficient; samples are synthesized on the grid.
    pub fn from_laurent(poly: &LaurentPoly, grid: CircleGrid, n_f: usize) -> Result<Self> {
        let (lo, hi) = poly.degree_range();
        if (-(n_f as i64) > lo && !poly.is_zero()) || hi > n_f as i64 {
            return resolution(format!(
                "coefficient window N_F = {n_f} too small for Laurent degrees [{lo}, {hi}]"
            ));
        }
        if 2 * n_f >= grid.len() {
            return resolution(format!(
                "aliasing: window N_F = {n_f} needs a grid with more than {} points, got {}",
                2 * n_f,
                grid.len()
            ));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n_f + 1];
        for (&j, &v) in poly.iter() {
            coeffs[(j + n_f as i64) as usize] = v;
        }
        let samples = grid.points().iter().map(|&t| poly.eval(t)).collect();
        Ok(Symbol { grid, samples, n_f, coeffs, tail_bound: 0.0, exact: Some(poly.clone()) })
    }

    /// The coefficient window bound N_F.
    pub fn n_f(&self) -> usize {
        self.n_f
    }

    /// The grid the symbol lives on.
    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    /// The samples on the grid.
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Estimate of Σ_{|j|>N_F} |â(j)|.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// The exact Laurent coefficients, when the symbol was built from them.
    pub fn exact_laurent(&self) -> Option<&LaurentPoly> {
        self.exact.as_ref()
    }

    /// Fourier coefficient â(j); zero outside the window.
    pub fn coeff(&self, j: i64) -> Complex64 {
        if j.unsigned_abs() as usize > self.n_f {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(j + self.n_f as i64) as usize]
        }
    }

    /// The flipped symbol ã(t) = a(t⁻¹): coefficients â(−j), samples reindexed.
    pub fn flip(&self) -> Symbol {
        let m = self.grid.len();
        let samples = (0..m).map(|k| self.samples[(m - k) % m]).collect();
        let coeffs = self.coeffs.iter().rev().cloned().collect();
        Symbol {
            grid: self.grid.clone(),
            samples,
            n_f: self.n_f,
            coeffs,
            tail_bound: self.tail_bound,
            exact: self.exact.as_ref().map(LaurentPoly::flip),
        }
    }

    /// The complex conjugate symbol: coefficients conj(â(−j)).
    pub fn conjugate(&self) -> Symbol {
        let samples = self.samples.iter().map(|v| v.conj()).collect();
        let coeffs = self.coeffs.iter().rev().map(|v| v.conj()).collect();
        Symbol {
            grid: self.grid.clone(),
            samples,
            n_f: self.n_f,
            coeffs,
            tail_bound: self.tail_bound,
            exact: self.exact.as_ref().map(LaurentPoly::conjugate),
        }
    }

    /// Pointwise product on the shared grid, re-analyzed with the summed
    /// window (clamped below the aliasing limit).
    pub fn product(&self, other: &Symbol) -> Result<Symbol> {
        if self.grid.len() != other.grid.len() {
            return domain("symbol product needs matching grids".to_string());
        }
        let samples: Vec<Complex64> =
            self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        let n_f = (self.n_f + other.n_f).min((self.grid.len() - 1) / 2);
        let mut out = Symbol::analyze_samples(samples, self.grid.clone(), n_f)?;
        out.exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a.product(b)),
            _ => None,
        };
        Ok(out)
    }

    /// True when the coefficients are conjugate-symmetric (real-valued symbol).
    pub fn is_real(&self) -> bool {
        let scale = self.coeffs.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        (0..=self.n_f as i64)
            .all(|j| (self.coeff(j) - self.coeff(-j).conj()).norm() <= 1e-12 * scale)
    }

    /// Minimum of the real part over the grid samples.
    pub fn min_real_on_grid(&self) -> f64 {
        self.samples.iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }

    /// Maximum modulus over the grid samples.
    pub fn max_abs_on_grid(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// A finite Laurent polynomial Σ c_j t^j held as an exact coefficient map.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    /// Builds from (degree, coefficient) pairs; zero coefficients are dropped.
    pub fn new(entries: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (j, v) in entries {
            if v != Complex64::new(0.0, 0.0) {
                *coeffs.entry(j).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
        }
        coeffs.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        LaurentPoly { coeffs }
    }

    /// The constant polynomial.
    pub fn constant(v: Complex64) -> Self {
        LaurentPoly::new([(0, v)])
    }

    /// The symbol of the forward shift, a(t) = t.
    pub fn shift() -> Self {
        LaurentPoly::new([(1, Complex64::new(1.0, 0.0))])
    }

    /// Coefficient of t^j.
    pub fn coeff(&self, j: i64) -> Complex64 {
        self.coeffs.get(&j).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterates over (degree, coefficient) pairs in degree order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Complex64)> {
        self.coeffs.iter()
    }

    /// True when identically zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest and largest degree with nonzero coefficient (0,0 for zero).
    pub fn degree_range(&self) -> (i64, i64) {
        match (self.coeffs.keys().next(), self.coeffs.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0, 0),
        }
    }

    /// max(|lowest degree|, |highest degree|).
    pub fn degree_bound(&self) -> usize {
        let (lo, hi) = self.degree_range();
        lo.unsigned_abs().max(hi.unsigned_abs()) as usize
    }

    /// Exact convolution product.
    pub fn product(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (&j, &a) in &self.coeffs {
            for (&k, &b) in &other.coeffs {
                *out.entry(j + k).or_insert(Complex64::new(0.0, 0.0)) += a * b;
            }
        }
        out.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        LaurentPoly { coeffs: out }
    }

    /// The flipped polynomial ã(t) = a(t⁻¹).
    pub fn flip(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&j, &v)| (-j, v)).collect() }
    }

    /// The complex-conjugate symbol: coefficients conj(c(−j)).
    pub fn conjugate(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&j, &v)| (-j, v.conj())).collect() }
    }

    /// Pointwise evaluation.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&j, &v) in &self.coeffs {
            acc += v * t.powi(j as i32);
        }
        acc
    }

    /// True when the symbol is real-valued on the circle.
    pub fn is_real(&self) -> bool {
        let scale = self.coeffs.values().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        self.coeffs.iter().all(|(&j, &v)| (v - self.coeff(-j).conj()).norm() <= 1e-14 * scale)
    }

    /// Coefficients c(0..=len−1) of the analytic part as a dense vector.
    pub fn analytic_coeffs(&self, len: usize) -> Vec<Complex64> {
        (0..len as i64).map(|j| self.coeff(j)).collect()
    }
}

/// Basis attached to the rows/columns of an operator matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisTag {
    /// Fourier window 0..len−1 of H².
    Fourier { len: usize },
    /// Takenaka–Malmquist basis of the order-n model space.
    Tm { n: usize },
}

/// Dense complex matrix representing an operator compressed to a finite basis.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    /// The matrix entries.
    pub entries: CMatrix,
    /// Basis of the row index.
    pub row_basis: BasisTag,
    /// Basis of the column index.
    pub col_basis: BasisTag,
    /// Set when window truncation may dominate the entries.
    pub truncation_flag: bool,
}

impl OperatorMatrix {
    /// Wraps entries in Fourier-window tags.
    pub fn fourier(entries: CMatrix, truncation_flag: bool) -> Self {
        let (r, c) = (entries.nrows(), entries.ncols());
        OperatorMatrix {
            entries,
            row_basis: BasisTag::Fourier { len: r },
            col_basis: BasisTag::Fourier { len: c },
            truncation_flag,
        }
    }
}

/// Spectral/Frobenius norms of a residual matrix plus its truncation context.
#[derive(Clone, Copy, Debug)]
pub struct ResidualReport {
    /// Spectral-norm residual.
    pub spectral: f64,
    /// Frobenius-norm residual.
    pub frobenius: f64,
    /// Set when window truncation may dominate the residual.
    pub truncation_flag: bool,
}

/// Toeplitz matrix T(a)[j,k] = â(j−k) on the N-dimensional Fourier window.
pub fn toeplitz_matrix(a: &Symbol, n: usize) -> Result<OperatorMatrix> {
    if n == 0 {
        return domain("toeplitz_matrix needs N ≥ 1");
    }
    // Needs â up to degree ±(n−1); flag only when out-of-window entries are
    // required and the tail estimate says they are not negligible.
    let covered = n <= a.n_f() + 1;
    let flag = (!covered && a.tail_bound() > 1e-13) || a.tail_bound() > 1e-12;
    let entries = CMatrix::from_fn(n, n, |j, k| a.coeff(j as i64 - k as i64));
    Ok(OperatorMatrix::fourier(entries, flag))
}

/// Hankel matrix H(a)[j,k] = â(j+k+1) on the N-dimensional Fourier window.
pub fn hankel_matrix(a: &Symbol, n: usize) -> Result<OperatorMatrix> {
    if n == 0 {
        return domain("hankel_matrix needs N ≥ 1");
    }
    // Needs â up to degree 2n−1.
    let covered = 2 * n <= a.n_f() + 1;
    let flag = (!covered && a.tail_bound() > 1e-13) || a.tail_bound() > 1e-12;
    let entries = CMatrix::from_fn(n, n, |j, k| a.coeff((j + k + 1) as i64));
    Ok(OperatorMatrix::fourier(entries, flag))
}

/// The rank-n partial isometry Rₙ = H(tⁿ) on an N-window: ones on the
/// antidiagonal j + k = n − 1.
pub fn r_n_matrix(n: usize, window: usize) -> CMatrix {
    let mut m = CMatrix::zeros(window, window);
    for j in 0..n.min(window) {
        let k = n - 1 - j;
        if k < window {
            m[(j, k)] = Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// Projects onto the first `n` coordinates of an N-window (in place form).
fn compress_to_first(mat: &CMatrix, n: usize) -> CMatrix {
    let mut out = mat.clone();
    let dim = mat.nrows();
    for j in 0..dim {
        for k in 0..dim {
            if j >= n || k >= n {
                out[(j, k)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    out
}

/// Spectral-norm residual of Widom's identity on the N-window:
/// PₙT(ab)Pₙ − [PₙT(a)PₙT(b)Pₙ + PₙH(a)H(b̃)Pₙ + RₙH(ã)H(b)Rₙ].
///
/// For trigonometric-polynomial symbols the residual is exact-zero scale
/// (< 1e−12) once N ≥ n + deg(a) + deg(b); otherwise the truncation flag
/// reports that the window dominates.
pub fn classical_widom_residual(a: &Symbol, b: &Symbol, n: usize, window: usize) -> Result<ResidualReport> {
    if n > window {
        return domain(format!("widom residual needs n ≤ N, got n = {n}, N = {window}"));
    }
    let ab = a.product(b)?;
    let t_ab = toeplitz_matrix(&ab, window)?;
    let t_a = toeplitz_matrix(a, window)?;
    let t_b = toeplitz_matrix(b, window)?;
    let h_a = hankel_matrix(a, window)?;
    let h_bt = hankel_matrix(&b.flip(), window)?;
    let h_at = hankel_matrix(&a.flip(), window)?;
    let h_b = hankel_matrix(b, window)?;
    let r_n = r_n_matrix(n, window);

    let lhs = compress_to_first(&t_ab.entries, n);
    let term1 = {
        let pa = compress_to_first(&t_a.entries, n);
        let pb = compress_to_first(&t_b.entries, n);
        compress_to_first(&(&pa * &pb), n)
    };
    let term2 = compress_to_first(&(&h_a.entries * &h_bt.entries), n);
    let term3 = &r_n * &h_at.entries * &h_b.entries * &r_n;
    let res = lhs - term1 - term2 - term3;
    let truncation_flag = t_ab.truncation_flag
        || t_a.truncation_flag
        || t_b.truncation_flag
        || h_a.truncation_flag
        || h_bt.truncation_flag
        || h_at.truncation_flag
        || h_b.truncation_flag;
    Ok(ResidualReport {
        spectral: linalg::spectral_norm(&res),
        frobenius: linalg::frobenius(&res),
        truncation_flag,
    })
}

/// Coefficient accessor that treats indices beyond the slice as zero.
#[inline]
fn at(v: &[Complex64], i: usize) -> Complex64 {
    v.get(i).copied().unwrap_or(Complex64::new(0.0, 0.0))
}

/// The product H_N(v)·H_N(w)* of two N-window Hankel matrices, assembled in
/// O(N²) by sliding-window recurrences along diagonals:
///
/// ```text
/// out[p,q] = Σ_{l=0}^{N−1} v(p+l+1)·conj(w(q+l+1)).
/// ```
///
/// `v` and `w` are analytic coefficient slices (index = degree); entries past
/// the slice end count as zero, so passing at least 2N coefficients makes the
/// result exact for the window.
pub fn hankel_product_adj(v: &[Complex64], w: &[Complex64], n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for d in -(n as i64 - 1)..=(n as i64 - 1) {
        // Walk the diagonal p − q = d from the high corner downward.
        let (mut p, mut q) = if d >= 0 { (n - 1, n - 1 - d as usize) } else { (n - 1 - (-d) as usize, n - 1) };
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..n {
            acc += at(v, p + l + 1) * at(w, q + l + 1).conj();
        }
        out[(p, q)] = acc;
        while p > 0 && q > 0 {
            // Shift the sliding window: gain (p, q) term, lose the tail term.
            acc += at(v, p) * at(w, q).conj() - at(v, p + n) * at(w, q + n).conj();
            p -= 1;
            q -= 1;
            out[(p, q)] = acc;
        }
    }
    out
}

/// The N-window compression of M_v·P·M_{conj(w)} for analytic v, w:
///
/// ```text
/// out[p,q] = Σ_{l=0}^{min(p,q)} v(p−l)·conj(w(q−l)),
/// ```
///
/// assembled in O(N²) by forward recurrences along diagonals. With v = w an
/// inner function this is the compression of I − P_{K²_v} onto the window.
pub fn analytic_sandwich(v: &[Complex64], w: &[Complex64], n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for d in -(n as i64 - 1)..=(n as i64 - 1) {
        let (mut p, mut q) = if d >= 0 { (d as usize, 0usize) } else { (0usize, (-d) as usize) };
        let mut acc = at(v, p) * at(w, q).conj();
        out[(p, q)] = acc;
        while p + 1 < n && q + 1 < n {
            p += 1;
            q += 1;
            acc += at(v, p) * at(w, q).conj();
            out[(p, q)] = acc;
        }
    }
    out
}
