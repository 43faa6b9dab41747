//! Configuration ingestion, experiment orchestration, and report emission.
//!
//! An experiment is described by a single JSON document (see
//! [`ExperimentConfig`]).  Running it writes a machine-readable `result.json`
//! plus flat CSV tables of per-stage diagnostics into the output directory;
//! the `TTOFS_OUTPUT_DIR` environment variable overrides the configured
//! directory.  Identical configs with identical seeds produce bit-identical
//! tables.  Every table carries its resolution parameters (grid size `m`,
//! coefficient window `n_f`) and truncation flags, so no residual is reported
//! without its floor context.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::blaschke::{catalog, BlaschkeProduct, ZeroFamily};
use crate::error::{Error, Result};
use crate::fsd::{
    build_section, convergence_report, fredholm_kernel_estimate, pseudospectrum_grid,
    stability_probe, DecayRule, GridSpec, KernelVerdict, RankOneTerm, SequenceSpec,
    StabilityVerdict, SymbolSpec,
};
use crate::hardy::{CircleGrid, LaurentPoly, Symbol};
use crate::linalg::spectral_norm;
use crate::model_space::r_partial_isometry_check;
use crate::widom::{tto_widom_residual, WidomRoute};

/// Environment variable overriding the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "TTOFS_OUTPUT_DIR";

/// Largest accepted coefficient window (the basis adequacy loop will not
/// search past it).
const N_F_LIMIT: usize = 1 << 14;

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

/// A complex number in config files, written `{"re": …, "im": …}` (either
/// part may be omitted and defaults to 0).
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexField {
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<ComplexField> for Complex64 {
    fn from(v: ComplexField) -> Complex64 {
        Complex64::new(v.re, v.im)
    }
}

/// One Fourier coefficient `â(degree) = re + i·im` of a Laurent symbol.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientEntry {
    pub degree: i64,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Symbol descriptor: a finite Fourier coefficient map or a named shorthand.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SymbolDescriptor {
    /// `a(t) = t`.
    Shift,
    /// A constant symbol.
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// Explicit coefficients; duplicate degrees accumulate.
    Laurent { coefficients: Vec<CoefficientEntry> },
}

impl SymbolDescriptor {
    /// The described Laurent polynomial.
    pub fn to_poly(&self) -> LaurentPoly {
        match self {
            SymbolDescriptor::Shift => LaurentPoly::shift(),
            SymbolDescriptor::Constant { re, im } => {
                LaurentPoly::constant(Complex64::new(*re, *im))
            }
            SymbolDescriptor::Laurent { coefficients } => LaurentPoly::new(
                coefficients.iter().map(|e| (e.degree, Complex64::new(e.re, e.im))),
            ),
        }
    }

    /// Short tag for reports.
    pub fn tag(&self) -> String {
        match self {
            SymbolDescriptor::Shift => "shift".to_string(),
            SymbolDescriptor::Constant { re, im } => format!("constant({re}+{im}i)"),
            SymbolDescriptor::Laurent { coefficients } => {
                format!("laurent({} coefficients)", coefficients.len())
            }
        }
    }
}

/// One rank-one term of the compact part, in config form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankOneTermConfig {
    pub coefficient: ComplexField,
    pub left: Vec<ComplexField>,
    pub right: Vec<ComplexField>,
}

impl RankOneTermConfig {
    fn to_term(&self) -> RankOneTerm {
        RankOneTerm {
            coefficient: self.coefficient.into(),
            left: self.left.iter().map(|&v| v.into()).collect(),
            right: self.right.iter().map(|&v| v.into()).collect(),
        }
    }
}

/// The experiment selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Product-formula residuals `T(ab) − T(a)T(b) − corrections` per stage.
    Widom,
    /// Partial-isometry residuals of the stage products' Hankel operators.
    Isometry,
    /// σ_min trace and stability verdict of a section sequence.
    Stability,
    /// Hausdorff convergence of eigenvalue/singular/pseudospectral sets.
    Convergence,
    /// Kernel dimension estimate from the singular-value gap.
    Fredholm,
    /// Pseudospectral sublevel sets on a grid, per stage and level.
    Pseudospectra,
}

impl ExperimentKind {
    /// Kebab-case name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Widom => "widom",
            ExperimentKind::Isometry => "isometry",
            ExperimentKind::Stability => "stability",
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Fredholm => "fredholm",
            ExperimentKind::Pseudospectra => "pseudospectra",
        }
    }

    fn is_section_experiment(&self) -> bool {
        matches!(
            self,
            ExperimentKind::Stability
                | ExperimentKind::Convergence
                | ExperimentKind::Fredholm
                | ExperimentKind::Pseudospectra
        )
    }
}

/// Optional asserted outcomes; a mismatch fails the run with exit code 1.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Upper bound for every residual column (widom, isometry).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    /// Required stability verdict (stability).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<StabilityVerdict>,
    /// Required detected kernel dimension (fredholm).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_dimension: Option<usize>,
}

fn default_n_f() -> usize {
    512
}
fn default_threshold() -> f64 {
    0.5
}
fn default_gap_factor() -> f64 {
    0.5
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("ttofs-out")
}

/// A complete experiment description (JSON schema of the config files).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Which experiment to run.
    pub experiment: ExperimentKind,
    /// Zero family generating the Blaschke product.
    pub family: ZeroFamily,
    /// Toeplitz symbol; required by every experiment except `isometry`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolDescriptor>,
    /// Second symbol of the product formula (widom only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_b: Option<SymbolDescriptor>,
    /// Stage list, strictly increasing.
    pub n_list: Vec<usize>,
    /// Coefficient window N_F.
    #[serde(default = "default_n_f")]
    pub n_f: usize,
    /// Circle-grid override for sampled assembly (defaults to the adequate
    /// grid for `n_f`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_m: Option<usize>,
    /// Pseudospectrum levels (convergence, pseudospectra).
    #[serde(default)]
    pub eps_list: Vec<f64>,
    /// Stability threshold for σ_min.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Gap factor of the kernel estimate.
    #[serde(default = "default_gap_factor")]
    pub gap_factor: f64,
    /// Seed for stochastic perturbation rules.
    #[serde(default)]
    pub seed: u64,
    /// Rank-one terms of the compact part (section experiments).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compact: Vec<RankOneTermConfig>,
    /// Perturbation decay rule (section experiments).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<DecayRule>,
    /// Explicit pseudospectrum grid (pseudospectra only; default auto-sized).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// Where artifacts are written (overridden by `TTOFS_OUTPUT_DIR`).
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Optional asserted outcomes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expects: Option<Expectations>,
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    let cfg: ExperimentConfig = serde_json::from_str(&text)?;
    Ok(cfg)
}

/// Schema-level validation: everything that can be checked before any
/// numerics run.  Violations map to exit code 2.
pub fn validate_config(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.n_list.is_empty() {
        return config_err("n_list must be nonempty");
    }
    if cfg.n_list[0] == 0 {
        return config_err("n_list entries must be ≥ 1");
    }
    if cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return config_err(format!("n_list must be strictly increasing, got {:?}", cfg.n_list));
    }
    if cfg.n_f == 0 || cfg.n_f > N_F_LIMIT {
        return config_err(format!("n_f must lie in 1..={N_F_LIMIT}, got {}", cfg.n_f));
    }
    if let Some(m) = cfg.grid_m {
        if m <= 2 * cfg.n_f {
            return config_err(format!(
                "grid_m = {m} aliases the coefficient window; need more than {}",
                2 * cfg.n_f
            ));
        }
    }
    let kind = cfg.experiment;
    let needs_symbol = kind != ExperimentKind::Isometry;
    if needs_symbol && cfg.symbol.is_none() {
        return config_err(format!("experiment '{}' needs a symbol", kind.name()));
    }
    if kind == ExperimentKind::Widom && cfg.symbol_b.is_none() {
        return config_err("the widom experiment needs symbol_b");
    }
    if kind != ExperimentKind::Widom && cfg.symbol_b.is_some() {
        return config_err("symbol_b only applies to the widom experiment");
    }
    let needs_eps =
        matches!(kind, ExperimentKind::Convergence | ExperimentKind::Pseudospectra);
    if needs_eps {
        if cfg.eps_list.is_empty() {
            return config_err(format!("experiment '{}' needs a nonempty eps_list", kind.name()));
        }
        if cfg.eps_list.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return config_err(format!("eps_list entries must be positive, got {:?}", cfg.eps_list));
        }
    } else if !cfg.eps_list.is_empty() {
        return config_err("eps_list only applies to convergence/pseudospectra experiments");
    }
    if kind == ExperimentKind::Stability {
        if cfg.n_list.len() < 3 {
            return config_err("the stability experiment needs at least 3 stages");
        }
        if !(cfg.threshold > 0.0 && cfg.threshold.is_finite()) {
            return config_err(format!("threshold must be positive, got {}", cfg.threshold));
        }
    }
    if kind == ExperimentKind::Fredholm && !(cfg.gap_factor > 0.0 && cfg.gap_factor < 1.0) {
        return config_err(format!("gap_factor must lie in (0,1), got {}", cfg.gap_factor));
    }
    if !kind.is_section_experiment() {
        if !cfg.compact.is_empty() {
            return config_err("a compact part only applies to section experiments");
        }
        if cfg.perturbation.is_some() {
            return config_err("a perturbation rule only applies to section experiments");
        }
    }
    if let Some(rule) = &cfg.perturbation {
        rule.validate().map_err(|e| Error::Config(e.to_string()))?;
    }
    if cfg.grid.is_some() && kind != ExperimentKind::Pseudospectra {
        return config_err("an explicit grid only applies to the pseudospectra experiment");
    }
    if let Some(grid) = &cfg.grid {
        grid.validate().map_err(|e| Error::Config(e.to_string()))?;
    }
    if let Some(expects) = &cfg.expects {
        let widom_like = matches!(kind, ExperimentKind::Widom | ExperimentKind::Isometry);
        if expects.max_residual.is_some() && !widom_like {
            return config_err("expects.max_residual applies to widom/isometry experiments");
        }
        if expects.verdict.is_some() && kind != ExperimentKind::Stability {
            return config_err("expects.verdict applies to the stability experiment");
        }
        if expects.kernel_dimension.is_some() && kind != ExperimentKind::Fredholm {
            return config_err("expects.kernel_dimension applies to the fredholm experiment");
        }
    }
    // Partial-product experiments address prefixes directly, so every stage
    // must exist within the family.
    if !kind.is_section_experiment() {
        if let Some(count) = cfg.family.count() {
            let max_n = *cfg.n_list.last().expect("nonempty");
            if max_n > count {
                return config_err(format!(
                    "stage {max_n} exceeds the family's {count} zeros"
                ));
            }
        }
    }
    Ok(())
}

fn materialize_family(cfg: &ExperimentConfig) -> Result<BlaschkeProduct> {
    let needed = *cfg.n_list.last().expect("validated nonempty");
    let order = match cfg.family.count() {
        Some(count) => count.min(needed),
        None => needed,
    };
    BlaschkeProduct::from_family(cfg.family.clone(), order)
}

fn sequence_spec(cfg: &ExperimentConfig) -> Result<SequenceSpec> {
    let u = materialize_family(cfg)?;
    let poly = cfg.symbol.as_ref().expect("validated").to_poly();
    let spec = SequenceSpec {
        u,
        symbol: SymbolSpec::Laurent(poly),
        compact: cfg.compact.iter().map(RankOneTermConfig::to_term).collect(),
        perturbation: cfg.perturbation.clone(),
        seed: cfg.seed,
        n_f: cfg.n_f,
    };
    spec.validate()?;
    Ok(spec)
}

/// One flat output table.
struct Table {
    name: &'static str,
    header: &'static str,
    rows: Vec<String>,
}

impl Table {
    fn new(name: &'static str, header: &'static str) -> Table {
        Table { name, header, rows: Vec::new() }
    }

    fn text(&self) -> String {
        let mut out = String::with_capacity(self.header.len() + 1 + 24 * self.rows.len());
        out.push_str(self.header);
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }
}

fn fnum(v: f64) -> String {
    format!("{v:.17e}")
}

struct Outcome {
    summary: serde_json::Value,
    tables: Vec<Table>,
    failures: Vec<String>,
}

fn run_widom(cfg: &ExperimentConfig) -> Result<Outcome> {
    let u = materialize_family(cfg)?;
    let poly_a = cfg.symbol.as_ref().expect("validated").to_poly();
    let poly_b = cfg.symbol_b.as_ref().expect("validated").to_poly();
    let grid = match cfg.grid_m {
        Some(m) => CircleGrid::new(m)?,
        None => CircleGrid::adequate_for(cfg.n_f)?,
    };
    let sa = Symbol::from_laurent(&poly_a, grid.clone(), cfg.n_f)?;
    let sb = Symbol::from_laurent(&poly_b, grid, cfg.n_f)?;
    let mut table = Table::new(
        "residuals.csv",
        "n,n_f,m,route,residual_spectral,residual_frobenius,truncation_flag",
    );
    let mut failures = Vec::new();
    let mut residuals = Vec::new();
    for &n in &cfg.n_list {
        let rep = tto_widom_residual(&u, &sa, &sb, n, cfg.n_f)?;
        let route = match rep.route {
            WidomRoute::Core => "core",
            WidomRoute::Window => "window",
            WidomRoute::Auto => "auto",
        };
        let mut row = String::new();
        let _ = write!(
            row,
            "{n},{},{},{route},{},{},{}",
            rep.n_f,
            rep.m,
            fnum(rep.residual_spectral),
            fnum(rep.residual_frobenius),
            rep.truncation_flag
        );
        table.rows.push(row);
        if let Some(bound) = cfg.expects.as_ref().and_then(|e| e.max_residual) {
            if !(rep.residual_spectral <= bound) {
                failures.push(format!(
                    "stage {n}: residual {:.3e} exceeds the expected bound {bound:.3e}",
                    rep.residual_spectral
                ));
            }
        }
        residuals.push(json!({
            "n": n,
            "residual_spectral": rep.residual_spectral,
            "residual_frobenius": rep.residual_frobenius,
            "route": route,
            "truncation_flag": rep.truncation_flag,
        }));
    }
    Ok(Outcome {
        summary: json!({ "residuals": residuals }),
        tables: vec![table],
        failures,
    })
}

fn run_isometry(cfg: &ExperimentConfig) -> Result<Outcome> {
    let u = materialize_family(cfg)?;
    let mut table = Table::new(
        "residuals.csv",
        "n,n_f,m,res_direct,res_reflected,truncation_flag",
    );
    let mut failures = Vec::new();
    let mut residuals = Vec::new();
    for &n in &cfg.n_list {
        let rep = r_partial_isometry_check(&u, n, cfg.n_f)?;
        table.rows.push(format!(
            "{n},{},0,{},{},{}",
            cfg.n_f,
            fnum(rep.res1),
            fnum(rep.res2),
            rep.truncation_flag
        ));
        if let Some(bound) = cfg.expects.as_ref().and_then(|e| e.max_residual) {
            if !(rep.res1 <= bound && rep.res2 <= bound) {
                failures.push(format!(
                    "stage {n}: residuals ({:.3e}, {:.3e}) exceed the expected bound {bound:.3e}",
                    rep.res1, rep.res2
                ));
            }
        }
        residuals.push(json!({
            "n": n,
            "res_direct": rep.res1,
            "res_reflected": rep.res2,
            "truncation_flag": rep.truncation_flag,
        }));
    }
    Ok(Outcome {
        summary: json!({ "residuals": residuals }),
        tables: vec![table],
        failures,
    })
}

fn run_stability(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = sequence_spec(cfg)?;
    let report = stability_probe(&spec, &cfg.n_list, cfg.threshold)?;
    let mut table = Table::new("sigma_min_trace.csv", "n,n_f,m,sigma_min,truncation_flag");
    for ((&n, &s), &flag) in cfg
        .n_list
        .iter()
        .zip(&report.sigma_min_trace)
        .zip(&report.truncation_flags)
    {
        table.rows.push(format!("{n},{},0,{},{flag}", cfg.n_f, fnum(s)));
    }
    let mut failures = Vec::new();
    if let Some(expected) = cfg.expects.as_ref().and_then(|e| e.verdict) {
        if report.verdict != expected {
            failures.push(format!(
                "verdict {:?} does not match the expected {:?}",
                report.verdict, expected
            ));
        }
    }
    Ok(Outcome {
        summary: json!({
            "verdict": report.verdict,
            "threshold": report.threshold,
            "certificate_floor": report.certificate_floor,
            "sigma_min_trace": report.sigma_min_trace,
        }),
        tables: vec![table],
        failures,
    })
}

fn run_convergence(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = sequence_spec(cfg)?;
    let report = convergence_report(&spec, &cfg.n_list, &cfg.eps_list)?;
    let mut tracks = Table::new(
        "hausdorff_tracks.csv",
        "track,n,n_f,m,distance,tail_nonincreasing,truncation_flag",
    );
    let mut failures = Vec::new();
    for track in &report.tracks {
        for ((&n, &d), stage) in report
            .n_list
            .iter()
            .zip(&track.distances)
            .zip(&report.stages)
        {
            tracks.rows.push(format!(
                "{},{n},{},0,{},{},{}",
                track.label,
                cfg.n_f,
                fnum(d),
                track.tail_nonincreasing,
                stage.truncation_flag
            ));
        }
        if !track.tail_nonincreasing {
            failures.push(format!(
                "track '{}' is not nonincreasing within 10% slack: {:?}",
                track.label, track.distances
            ));
        }
    }
    let mut stages = Table::new(
        "stage_spectra.csv",
        "n,n_f,m,index,singular_value,eigenvalue,truncation_flag",
    );
    for stage in &report.stages {
        for (idx, &s) in stage.singular.iter().enumerate() {
            let eig = stage
                .eigenvalues
                .as_ref()
                .map(|e| fnum(e[idx]))
                .unwrap_or_default();
            stages.rows.push(format!(
                "{},{},0,{idx},{},{eig},{}",
                stage.n,
                cfg.n_f,
                fnum(s),
                stage.truncation_flag
            ));
        }
    }
    Ok(Outcome {
        summary: json!({
            "eigen_track": report.eigen_track,
            "reference_n": report.reference_n,
            "tracks": report.tracks.iter().map(|t| json!({
                "label": t.label,
                "distances": t.distances,
                "tail_nonincreasing": t.tail_nonincreasing,
            })).collect::<Vec<_>>(),
        }),
        tables: vec![tracks, stages],
        failures,
    })
}

fn run_fredholm(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = sequence_spec(cfg)?;
    let report = fredholm_kernel_estimate(&spec, &cfg.n_list, cfg.gap_factor)?;
    let mut table = Table::new("singular_values.csv", "n,n_f,m,index,sigma,truncation_flag");
    for ((&n, row), &flag) in cfg
        .n_list
        .iter()
        .zip(&report.singular_tables)
        .zip(&report.truncation_flags)
    {
        for (idx, &s) in row.iter().enumerate() {
            table.rows.push(format!("{n},{},0,{idx},{},{flag}", cfg.n_f, fnum(s)));
        }
    }
    let mut failures = Vec::new();
    if let Some(expected) = cfg.expects.as_ref().and_then(|e| e.kernel_dimension) {
        match report.verdict {
            KernelVerdict::Detected { dimension } if dimension == expected => {}
            ref other => failures.push(format!(
                "kernel verdict {other:?} does not match the expected dimension {expected}"
            )),
        }
    }
    Ok(Outcome {
        summary: json!({
            "verdict": report.verdict,
            "vanish_tolerance": report.vanish_tolerance,
            "gap_factor": report.gap_factor,
        }),
        tables: vec![table],
        failures,
    })
}

fn run_pseudospectra(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = sequence_spec(cfg)?;
    let sections = cfg
        .n_list
        .iter()
        .map(|&n| build_section(&spec, n))
        .collect::<Result<Vec<_>>>()?;
    let grid = match cfg.grid {
        Some(g) => g,
        None => {
            let max_norm =
                sections.iter().map(|s| spectral_norm(&s.entries)).fold(0.0, f64::max);
            let max_eps = cfg.eps_list.iter().cloned().fold(0.0, f64::max);
            let min_eps = cfg.eps_list.iter().cloned().fold(f64::INFINITY, f64::min);
            GridSpec::covering(max_norm, 2.0 * max_eps, min_eps)
        }
    };
    let mut table = Table::new("sublevel_points.csv", "n,n_f,m,eps,re,im,truncation_flag");
    let mut failures = Vec::new();
    let mut summaries = Vec::new();
    for (&n, section) in cfg.n_list.iter().zip(&sections) {
        for &eps in &cfg.eps_list {
            let rep = pseudospectrum_grid(section, eps, &grid)?;
            for p in &rep.set.points {
                table.rows.push(format!(
                    "{n},{},0,{},{},{},{}",
                    cfg.n_f,
                    fnum(eps),
                    fnum(p.re),
                    fnum(p.im),
                    section.truncation_flag
                ));
            }
            if rep.coverage_warning {
                failures.push(format!(
                    "coverage warning at stage {n}, eps {eps}: the sublevel set touches the \
                     grid boundary"
                ));
            }
            summaries.push(json!({
                "n": n,
                "eps": eps,
                "points": rep.set.points.len(),
                "coverage_warning": rep.coverage_warning,
                "self_adjoint_shortcut": rep.self_adjoint_shortcut,
            }));
        }
    }
    Ok(Outcome {
        summary: json!({ "grid": grid, "levels": summaries }),
        tables: vec![table],
        failures,
    })
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.experiment {
        ExperimentKind::Widom => run_widom(cfg),
        ExperimentKind::Isometry => run_isometry(cfg),
        ExperimentKind::Stability => run_stability(cfg),
        ExperimentKind::Convergence => run_convergence(cfg),
        ExperimentKind::Fredholm => run_fredholm(cfg),
        ExperimentKind::Pseudospectra => run_pseudospectra(cfg),
    }
}

/// Paths written by a run.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    /// Resolved output directory.
    pub output_dir: PathBuf,
    /// The `result.json` path.
    pub result_path: PathBuf,
    /// CSV table paths.
    pub table_paths: Vec<PathBuf>,
}

/// Resolves the output directory, honoring the environment override.
pub fn resolve_output_dir(cfg: &ExperimentConfig) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => cfg.output_dir.clone(),
    }
}

/// Validates and runs a config, writing `result.json` and the CSV tables.
///
/// Assertion failures (expected outcomes not met, nonincreasing-tail
/// violations, coverage warnings) still write all artifacts, then surface as
/// [`Error::Assertion`] so the process exits with code 1.
pub fn run_config(cfg: &ExperimentConfig) -> Result<RunArtifacts> {
    validate_config(cfg)?;
    let out_dir = resolve_output_dir(cfg);
    fs::create_dir_all(&out_dir)?;
    let outcome = dispatch(cfg)?;
    let mut table_paths = Vec::new();
    for t in &outcome.tables {
        let path = out_dir.join(t.name);
        fs::write(&path, t.text())?;
        table_paths.push(path);
    }
    let status = if outcome.failures.is_empty() { "pass" } else { "fail" };
    let result = json!({
        "status": status,
        "experiment": cfg.experiment.name(),
        "failures": outcome.failures,
        "config": cfg,
        "summary": outcome.summary,
        "tables": outcome.tables.iter().map(|t| t.name).collect::<Vec<_>>(),
    });
    let result_path = out_dir.join("result.json");
    fs::write(&result_path, format!("{:#}\n", result))?;
    if !outcome.failures.is_empty() {
        return Err(Error::Assertion(outcome.failures.join("; ")));
    }
    Ok(RunArtifacts { output_dir: out_dir, result_path, table_paths })
}

/// Loads, validates, and runs a config file.
pub fn run_config_file(path: &Path) -> Result<RunArtifacts> {
    let cfg = load_config(path)?;
    run_config(&cfg)
}

/// Loads and validates a config file without running it; returns the parsed
/// config on success.
pub fn validate_config_file(path: &Path) -> Result<ExperimentConfig> {
    let cfg = load_config(path)?;
    validate_config(&cfg)?;
    // Constructing the product surfaces family-level problems (exhausted
    // finite families, out-of-range parameters) at validation time.
    materialize_family(&cfg)?;
    Ok(cfg)
}

/// Human-readable catalog of built-in zero families and symbol descriptors.
pub fn families_text() -> String {
    let mut out = String::new();
    out.push_str("Zero families (config field \"family\"):\n");
    for entry in catalog() {
        let verdict = match entry.verdict {
            crate::blaschke::Verdict::Converging => "converging",
            crate::blaschke::Verdict::Diverging => "diverging",
            crate::blaschke::Verdict::Unknown => "unknown",
        };
        let _ = write!(
            out,
            "\n  {}\n    parameters: {}\n    blaschke condition: {}\n    boundary cluster: {}\n    example: {}\n",
            entry.name, entry.parameters, verdict, entry.cluster, entry.example
        );
    }
    out.push_str(
        "\nSymbols (config fields \"symbol\", \"symbol_b\"):\n\
         \n  shift\n    a(t) = t\n    example: {\"kind\":\"shift\"}\n\
         \n  constant\n    a(t) = re + i·im\n    example: {\"kind\":\"constant\",\"re\":2.0}\n\
         \n  laurent\n    finite Fourier coefficient map; duplicate degrees accumulate\n    \
         example: {\"kind\":\"laurent\",\"coefficients\":[{\"degree\":-1,\"re\":0.5},{\"degree\":0,\"re\":2.0},{\"degree\":1,\"re\":0.5}]}\n",
    );
    out
}

/// Structured error record for nonzero exits.
pub fn error_record(e: &Error) -> serde_json::Value {
    let kind = match e {
        Error::Domain(_) => "domain",
        Error::Resolution(_) => "resolution",
        Error::Mode(_) => "mode",
        Error::Config(_) => "config",
        Error::Assertion(_) => "assertion",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    };
    json!({
        "status": "error",
        "kind": kind,
        "exit_code": e.exit_code(),
        "message": e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config(experiment: ExperimentKind) -> ExperimentConfig {
        ExperimentConfig {
            experiment,
            family: ZeroFamily::AllZeroPrefix { count: 8 },
            symbol: Some(SymbolDescriptor::Laurent {
                coefficients: vec![
                    CoefficientEntry { degree: -1, re: 0.5, im: 0.0 },
                    CoefficientEntry { degree: 0, re: 2.0, im: 0.0 },
                    CoefficientEntry { degree: 1, re: 0.5, im: 0.0 },
                ],
            }),
            symbol_b: None,
            n_list: vec![2, 4, 8],
            n_f: 64,
            grid_m: None,
            eps_list: Vec::new(),
            threshold: 0.5,
            gap_factor: 0.5,
            seed: 7,
            compact: Vec::new(),
            perturbation: None,
            grid: None,
            output_dir: PathBuf::from("unused"),
            expects: None,
        }
    }

    #[test]
    fn schema_rejects_nonincreasing_stage_lists() {
        let mut cfg = base_config(ExperimentKind::Stability);
        cfg.n_list = vec![4, 4, 8];
        match validate_config(&cfg) {
            Err(Error::Config(msg)) => assert!(msg.contains("strictly increasing")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn schema_rejects_missing_symbol_b_for_widom() {
        let cfg = base_config(ExperimentKind::Widom);
        assert!(matches!(validate_config(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn schema_rejects_stages_beyond_finite_family_for_prefix_experiments() {
        let mut cfg = base_config(ExperimentKind::Isometry);
        cfg.symbol = None;
        cfg.n_list = vec![2, 4, 16];
        assert!(matches!(validate_config(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn schema_rejects_misplaced_fields() {
        let mut cfg = base_config(ExperimentKind::Widom);
        cfg.symbol_b = Some(SymbolDescriptor::Shift);
        cfg.perturbation = Some(DecayRule::Reciprocal { c: 1.0 });
        assert!(matches!(validate_config(&cfg), Err(Error::Config(_))));
        let mut cfg = base_config(ExperimentKind::Stability);
        cfg.eps_list = vec![0.1];
        assert!(matches!(validate_config(&cfg), Err(Error::Config(_))));
        let mut cfg = base_config(ExperimentKind::Convergence);
        cfg.eps_list = vec![0.1];
        cfg.expects = Some(Expectations { kernel_dimension: Some(1), ..Default::default() });
        assert!(matches!(validate_config(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        let text = r#"{"experiment":"isometry","family":{"kind":"all-zero-prefix","count":4},
                       "n_list":[1,2],"n_f":16,"bogus":1}"#;
        let parsed: std::result::Result<ExperimentConfig, _> = serde_json::from_str(text);
        assert!(parsed.is_err());
    }

    #[test]
    fn catalog_examples_round_trip_through_config_validation() {
        for entry in catalog() {
            let family: ZeroFamily = serde_json::from_str(entry.example).unwrap();
            let mut cfg = base_config(ExperimentKind::Stability);
            cfg.family = family;
            validate_config(&cfg).unwrap();
            // The materialized product must also construct.
            materialize_family(&cfg).unwrap();
        }
    }

    #[test]
    fn symbol_descriptors_build_expected_polynomials() {
        assert_eq!(SymbolDescriptor::Shift.to_poly(), LaurentPoly::shift());
        let constant = SymbolDescriptor::Constant { re: 2.0, im: -1.0 };
        assert_eq!(
            constant.to_poly(),
            LaurentPoly::constant(Complex64::new(2.0, -1.0))
        );
        let cfg = base_config(ExperimentKind::Stability);
        let poly = cfg.symbol.unwrap().to_poly();
        assert_eq!(poly.coeff(0), Complex64::new(2.0, 0.0));
        assert_eq!(poly.coeff(1), Complex64::new(0.5, 0.0));
        assert_eq!(poly.coeff(-1), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn families_text_lists_all_catalog_entries() {
        let text = families_text();
        for entry in catalog() {
            assert!(text.contains(entry.name), "catalog entry {} missing", entry.name);
        }
        assert!(text.contains("shift"));
        assert!(text.contains("laurent"));
    }
}
