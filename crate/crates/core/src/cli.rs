//! Command-line front end.
//!
//! One config file (TOML, or JSON when the name ends in `.json`) describes a
//! run; flags override its keys. Every command writes `<command>.json` with
//! the fully resolved config and diagnostics, plus `<command>.csv` for table
//! output unless `--format json` folds the table into the JSON file.
//!
//! Exit codes: 0 success, 2 mathematical failure, 3 inconclusive, 64 usage,
//! 66 missing input, 74 output error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::additive::{split_additive_cardinal_grid, split_additive_spectral, spectral_cardinal_gap_bound, AdditiveSplit};
use crate::error::Error;
use crate::extrema::{extrema_distributions, wh_factors, DensityOptions, WhOptions, FACTOR_PD_TOL};
use crate::grid::{dawson_reference, dawson_via_cardinal, Grid, SampledFunction, C64, DEFAULT_H, DEFAULT_N_HALF};
use crate::levy::{KillingTime, LevyModel};
use crate::mc::{ks_distance, simulate_extrema, Monitoring, SimConfig};
use crate::multiplicative::{factorize_multiplicative, FactorizeOptions, SplitMethod};
use crate::posdef::{pd_report, PdConfig, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_IO: i32 = 74;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    fn no_input(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_NO_INPUT,
            message: format!("cannot read {}: {e}", path.display()),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("cannot write {}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical_failure() { EXIT_MATH } else { EXIT_USAGE };
        CliError { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// The function handed to `check-pd`, `decompose` and `factorize`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `exp(-x²/(2 s²))`
    Gaussian { scale: f64 },
    /// `1/(1 + (x/s)²)`
    Cauchy { scale: f64 },
    /// `exp(-|x|/s)`
    Laplace { scale: f64 },
    /// Indicator of `|x| <= half_width`; not positive definite.
    Rectangle { half_width: f64 },
    /// `sin(bx)/(bx)`, transform supported on `|ω| <= b`.
    Sinc { bandwidth: f64 },
    /// `(sin(bx)/(bx))²`, transform supported on `|ω| <= 2b`.
    SincSquared { bandwidth: f64 },
    /// `exp(iax) exp(-x²/(2 s²))`
    ModulatedGaussian { scale: f64, frequency: f64 },
    Constant { value: f64 },
    Zero,
    /// `E exp(iλX_t) = exp(-tψ(λ))` of `[model]`.
    LevyCharFn { t: f64 },
    /// Characteristic function of `X` at the `[killing]` time.
    KilledCharFn,
}

impl Default for FunctionSpec {
    fn default() -> Self {
        FunctionSpec::Gaussian { scale: 1.0 }
    }
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.sin() / t
    }
}

impl FunctionSpec {
    fn validate(&self) -> CliResult<()> {
        let positive = match *self {
            FunctionSpec::Gaussian { scale }
            | FunctionSpec::Cauchy { scale }
            | FunctionSpec::Laplace { scale }
            | FunctionSpec::ModulatedGaussian { scale, .. } => scale,
            FunctionSpec::Rectangle { half_width } => half_width,
            FunctionSpec::Sinc { bandwidth } | FunctionSpec::SincSquared { bandwidth } => bandwidth,
            FunctionSpec::LevyCharFn { t } => t,
            _ => 1.0,
        };
        let finite = match *self {
            FunctionSpec::ModulatedGaussian { frequency, .. } => frequency.is_finite(),
            FunctionSpec::Constant { value } => value.is_finite(),
            _ => true,
        };
        if positive.is_finite() && positive > 0.0 && finite {
            Ok(())
        } else {
            Err(CliError::usage(format!("invalid function {self:?}")))
        }
    }

    fn eval(&self, x: f64, model: &LevyModel, killing: &KillingTime) -> C64 {
        let re = |v: f64| C64::new(v, 0.0);
        match *self {
            FunctionSpec::Gaussian { scale } => re((-0.5 * (x / scale).powi(2)).exp()),
            FunctionSpec::Cauchy { scale } => re(1.0 / (1.0 + (x / scale).powi(2))),
            FunctionSpec::Laplace { scale } => re((-x.abs() / scale).exp()),
            FunctionSpec::Rectangle { half_width } => re(if x.abs() <= half_width { 1.0 } else { 0.0 }),
            FunctionSpec::Sinc { bandwidth } => re(sinc(bandwidth * x)),
            FunctionSpec::SincSquared { bandwidth } => re(sinc(bandwidth * x).powi(2)),
            FunctionSpec::ModulatedGaussian { scale, frequency } => {
                C64::new(0.0, frequency * x).exp() * (-0.5 * (x / scale).powi(2)).exp()
            }
            FunctionSpec::Constant { value } => re(value),
            FunctionSpec::Zero => re(0.0),
            FunctionSpec::LevyCharFn { t } => model.char_fn_at(x, t),
            FunctionSpec::KilledCharFn => killing.char_fn(model, x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub h: f64,
    pub n_half: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { h: DEFAULT_H, n_half: DEFAULT_N_HALF }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Residual bound for additive splits and factor products.
    pub tol_residual: f64,
    /// Absolute pd tolerance. Unset means `1e-8·sup|f|` for `check-pd` and
    /// 1e-3 for computed Wiener–Hopf factors.
    pub tol_pd: Option<f64>,
    pub tol_mass: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol_residual: 1e-6, tol_pd: None, tol_mass: 0.02 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: PathBuf::from("out"), format: OutputFormat::Csv }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtremaSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub clip_tol: f64,
}

impl Default for ExtremaSpec {
    fn default() -> Self {
        ExtremaSpec { x_min: -10.0, x_max: 10.0, dx: 0.01, clip_tol: 1e-3 }
    }
}

impl ExtremaSpec {
    fn x_grid(&self) -> Vec<f64> {
        let n = ((self.x_max - self.x_min) / self.dx + 1e-9).floor() as usize;
        (0..=n).map(|i| self.x_min + i as f64 * self.dx).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSpec {
    pub n_paths: usize,
    pub dt: f64,
    pub n_workers: usize,
    pub monitoring: Monitoring,
    /// CSV with columns `x`, `cdf_sup`, `cdf_inf` (as written by `extrema`).
    pub cdf_file: Option<PathBuf>,
}

impl Default for SimulateSpec {
    fn default() -> Self {
        SimulateSpec {
            n_paths: 100_000,
            dt: 1e-3,
            n_workers: 1,
            monitoring: Monitoring::default(),
            cdf_file: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DawsonSpec {
    /// Points such as `"1"`, `"-0.5i"` or `"1+0.5i"`.
    pub z: Vec<String>,
    pub h: f64,
    pub n_terms: usize,
}

impl Default for DawsonSpec {
    fn default() -> Self {
        DawsonSpec {
            z: ["0.5", "1", "2", "1+0.5i"].map(String::from).to_vec(),
            h: 0.1,
            n_terms: 400,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub function: FunctionSpec,
    pub model: LevyModel,
    pub killing: KillingTime,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    /// Constant added to `ln q - ln(q + ψ)` before the split.
    pub c: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub split: SplitMethod,
    pub normalize_at_zero: bool,
    pub output: OutputSpec,
    pub extrema: ExtremaSpec,
    pub simulate: SimulateSpec,
    pub dawson: DawsonSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            function: FunctionSpec::default(),
            model: LevyModel::brownian(0.0, 1.0),
            killing: KillingTime::Exponential { q: 1.0 },
            grid: GridSpec::default(),
            tolerances: Tolerances::default(),
            c: 0.0,
            epsilon: 0.0,
            seed: 0,
            split: SplitMethod::Cardinal,
            normalize_at_zero: false,
            output: OutputSpec::default(),
            extrema: ExtremaSpec::default(),
            simulate: SimulateSpec::default(),
            dawson: DawsonSpec::default(),
        }
    }
}

impl RunConfig {
    /// Reads TOML, or JSON for `.json` files. A JSON file with a top-level
    /// `config` object (a diagnostics file from an earlier run) yields that
    /// object.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::no_input(path, e))?;
        let bad = |e: &dyn std::fmt::Display| CliError::usage(format!("malformed config {}: {e}", path.display()));
        if path.extension().is_some_and(|e| e == "json") {
            let mut v: Value = serde_json::from_str(&text).map_err(|e| bad(&e))?;
            if let Some(inner) = v.get_mut("config").filter(|c| c.is_object()) {
                v = inner.take();
            }
            serde_json::from_value(v).map_err(|e| bad(&e))
        } else {
            toml::from_str(&text).map_err(|e| bad(&e))
        }
    }

    pub fn grid(&self) -> CliResult<Grid> {
        Ok(Grid::new(self.grid.h, self.grid.n_half)?)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.grid()?;
        self.function.validate()?;
        self.model.validate()?;
        self.killing.validate()?;
        let t = &self.tolerances;
        let tol_pd_ok = t.tol_pd.is_none_or(|v| v.is_finite() && v >= 0.0);
        if !(t.tol_residual > 0.0 && t.tol_mass > 0.0 && tol_pd_ok) {
            return Err(CliError::usage(format!("invalid tolerances {t:?}")));
        }
        if !(self.c.is_finite() && self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(CliError::usage("need finite c and epsilon >= 0"));
        }
        let e = &self.extrema;
        if !(e.dx > 0.0 && e.x_min < e.x_max && e.x_min.is_finite() && e.x_max.is_finite() && e.clip_tol >= 0.0) {
            return Err(CliError::usage(format!("invalid extrema grid {e:?}")));
        }
        self.sim_config().validate()?;
        if self.dawson.z.is_empty() {
            return Err(CliError::usage("dawson needs at least one z"));
        }
        for z in &self.dawson.z {
            parse_complex(z)?;
        }
        if !(self.dawson.h > 0.0 && self.dawson.n_terms > 0) {
            return Err(CliError::usage("dawson needs h > 0 and n_terms >= 1"));
        }
        Ok(())
    }

    fn pd_config(&self, default_tol: Option<f64>) -> PdConfig {
        PdConfig {
            tol: self.tolerances.tol_pd.or(default_tol),
            seed: self.seed,
            ..PdConfig::default()
        }
    }

    fn sample(&self) -> CliResult<SampledFunction> {
        let (f, m, k) = (self.function, self.model, self.killing);
        Ok(SampledFunction::from_fn(self.grid()?, |x| f.eval(x, &m, &k))?)
    }

    fn sim_config(&self) -> SimConfig {
        let s = &self.simulate;
        SimConfig {
            dt: s.dt,
            n_workers: s.n_workers,
            monitoring: s.monitoring,
            ..SimConfig::new(self.model, self.killing, s.n_paths, self.seed)
        }
    }

    fn wh_options(&self) -> WhOptions {
        WhOptions {
            c: self.c,
            split: self.split,
            tol_residual: self.tolerances.tol_residual,
            pd: self.pd_config(Some(FACTOR_PD_TOL)),
            ..WhOptions::default()
        }
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> CliResult<C64> {
    let bad = || CliError::usage(format!("cannot parse complex number {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |p: &str| -> CliResult<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => Ok(C64::new(body[..i].parse().map_err(|_| bad())?, imag(&body[i..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

#[derive(Parser, Debug)]
#[command(name = "rhfact", version, about = "Wiener-Hopf factorization and extrema of killed Levy processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run config (TOML, or JSON for .json files)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub grid_h: Option<f64>,
    #[arg(long, global = true)]
    pub grid_n: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Positive-definiteness report; exit 0 pd, 2 not pd, 3 inconclusive
    CheckPd,
    /// Additive split f = f+ + f-
    Decompose,
    /// Multiplicative factorization f = Phi+ Phi-
    Factorize,
    /// Densities and cdfs of the supremum and infimum at an exponential time
    Extrema,
    /// Monte-Carlo extrema, with KS distances against a model cdf file
    Simulate {
        /// CSV with columns x, cdf_sup, cdf_inf
        #[arg(long)]
        cdf: Option<PathBuf>,
    },
    /// Dawson's integral by the cardinal series against a reference
    Dawson {
        /// Comma-separated points, e.g. 0.5,1,1+0.5i
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Option<Vec<String>>,
        #[arg(long)]
        n_terms: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckPd => "check-pd",
            Command::Decompose => "decompose",
            Command::Factorize => "factorize",
            Command::Extrema => "extrema",
            Command::Simulate { .. } => "simulate",
            Command::Dawson { .. } => "dawson",
        }
    }
}

/// Loads the config and applies flag overrides.
pub fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &cli.out {
        cfg.output.dir = v.clone();
    }
    if let Some(v) = cli.format {
        cfg.output.format = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.epsilon {
        cfg.epsilon = v;
    }
    if let Some(v) = cli.grid_h {
        cfg.grid.h = v;
        cfg.dawson.h = v;
    }
    if let Some(v) = cli.grid_n {
        cfg.grid.n_half = v;
    }
    match &cli.command {
        Command::Simulate { cdf: Some(p) } => cfg.simulate.cdf_file = Some(p.clone()),
        Command::Dawson { z, n_terms } => {
            if let Some(z) = z {
                cfg.dawson.z = z.iter().filter(|s| !s.trim().is_empty()).cloned().collect();
            }
            if let Some(n) = n_terms {
                cfg.dawson.n_terms = *n;
            }
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

/// A table of real columns.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(s, "{v:.16e}").expect("writing to a String");
            }
            s.push('\n');
        }
        s
    }

    fn to_json(&self) -> Value {
        json!({ "columns": self.columns, "rows": self.rows })
    }
}

struct Outcome {
    code: i32,
    summary: String,
    diagnostics: Value,
    table: Option<Table>,
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn emit(cfg: &RunConfig, command: &str, outcome: &Outcome) -> CliResult<Vec<PathBuf>> {
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut doc = json!({
        "command": command,
        "config": cfg,
        "diagnostics": outcome.diagnostics,
    });
    let mut written = Vec::new();
    if let Some(t) = &outcome.table {
        match cfg.output.format {
            OutputFormat::Csv => {
                let p = dir.join(format!("{command}.csv"));
                write_file(&p, &t.to_csv())?;
                written.push(p);
            }
            OutputFormat::Json => doc["data"] = t.to_json(),
        }
    }
    let p = dir.join(format!("{command}.json"));
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    write_file(&p, &text)?;
    written.push(p);
    Ok(written)
}

fn complex_columns(lambda: &SampledFunction, parts: &[&SampledFunction]) -> Vec<Vec<f64>> {
    lambda
        .grid()
        .points()
        .enumerate()
        .map(|(i, x)| {
            let mut row = vec![x];
            for p in parts {
                let v = p.values()[i];
                row.push(v.re);
                row.push(v.im);
            }
            row
        })
        .collect()
}

fn cmd_check_pd(cfg: &RunConfig) -> CliResult<Outcome> {
    let f = cfg.sample()?;
    let report = pd_report(&f, &cfg.pd_config(None))?;
    let code = match report.verdict {
        Verdict::Pd => EXIT_OK,
        Verdict::NotPd => EXIT_MATH,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(Outcome {
        code,
        summary: format!(
            "verdict {:?}: min Bochner eigenvalue {:.3e}, negative spectral mass {:.3e}",
            report.verdict, report.min_bochner_eigenvalue, report.negative_spectral_mass
        ),
        diagnostics: json!({ "report": report }),
        table: None,
    })
}

fn split_diagnostics(s: &AdditiveSplit) -> Value {
    json!({
        "sum_residual": s.sum_residual,
        "wrongside_energy_plus": s.wrongside_energy_plus,
        "wrongside_energy_minus": s.wrongside_energy_minus,
        "total_energy": s.total_energy,
        "relative_wrongside": s.relative_wrongside(),
    })
}

fn cmd_decompose(cfg: &RunConfig) -> CliResult<Outcome> {
    let f = cfg.sample()?;
    let tol = cfg.tolerances.tol_residual;
    let split = match cfg.split {
        SplitMethod::Cardinal => split_additive_cardinal_grid(&f, tol)?,
        SplitMethod::Spectral => split_additive_spectral(&f, tol)?,
    };
    let mut diagnostics = split_diagnostics(&split);
    diagnostics["spectral_cardinal_gap_bound"] = json!(spectral_cardinal_gap_bound(&f));
    Ok(Outcome {
        code: EXIT_OK,
        summary: format!(
            "sum residual {:.3e}, relative wrong-side energy {:.3e}",
            split.sum_residual,
            split.relative_wrongside()
        ),
        diagnostics,
        table: Some(Table {
            columns: vec!["lambda", "re_f", "im_f", "re_fplus", "im_fplus", "re_fminus", "im_fminus"],
            rows: complex_columns(&f, &[&f, &split.f_plus, &split.f_minus]),
        }),
    })
}

const FACTOR_COLUMNS: [&str; 7] = ["lambda", "re_f", "im_f", "re_phi_plus", "im_phi_plus", "re_phi_minus", "im_phi_minus"];

fn cmd_factorize(cfg: &RunConfig) -> CliResult<Outcome> {
    let f = cfg.sample()?;
    if let (FunctionSpec::KilledCharFn, KillingTime::Exponential { q }) = (cfg.function, cfg.killing) {
        // exponential killing goes through the Wiener–Hopf route, whose
        // factors are characteristic functions of the extrema
        let wh = wh_factors(&cfg.model, q, cfg.grid()?, &cfg.wh_options())?;
        return Ok(Outcome {
            code: EXIT_OK,
            summary: format!("Wiener-Hopf factors, product residual {:.3e}", wh.product_residual),
            diagnostics: json!({
                "method": "wiener_hopf",
                "c_used": wh.c_used,
                "product_residual": wh.product_residual,
                "normalization": wh.normalization,
                "decay_plus": wh.decay_plus,
                "decay_minus": wh.decay_minus,
                "pd_plus": wh.pd_plus,
                "pd_minus": wh.pd_minus,
                "leakage_plus": wh.leakage_plus,
                "leakage_minus": wh.leakage_minus,
                "leakage_g_plus": wh.leakage_g_plus,
                "leakage_g_minus": wh.leakage_g_minus,
            }),
            table: Some(Table {
                columns: FACTOR_COLUMNS.to_vec(),
                rows: complex_columns(&f, &[&f, &wh.psi_q_plus, &wh.psi_q_minus]),
            }),
        });
    }
    let opts = FactorizeOptions {
        tol: cfg.tolerances.tol_residual,
        epsilon: cfg.epsilon,
        normalize_at_zero: cfg.normalize_at_zero,
        split: cfg.split,
        ..FactorizeOptions::default()
    };
    let r = factorize_multiplicative(&f, &opts)?;
    let pd_cfg = cfg.pd_config(None);
    Ok(Outcome {
        code: EXIT_OK,
        summary: format!("product residual {:.3e}", r.product_residual),
        diagnostics: json!({
            "method": "log_split",
            "const_lambda": r.const_lambda,
            "epsilon_used": r.epsilon_used,
            "normalization_factor": r.normalization_factor,
            "product_residual": r.product_residual,
            "min_abs": r.min_abs,
            "winding_accumulated": r.winding_accumulated,
            "pd_plus": pd_report(&r.phi_plus, &pd_cfg)?,
            "pd_minus": pd_report(&r.phi_minus, &pd_cfg)?,
        }),
        table: Some(Table {
            columns: FACTOR_COLUMNS.to_vec(),
            rows: complex_columns(&f, &[&f, &r.phi_plus, &r.phi_minus]),
        }),
    })
}

fn cmd_extrema(cfg: &RunConfig) -> CliResult<Outcome> {
    let KillingTime::Exponential { q } = cfg.killing else {
        return Err(CliError::usage("extrema needs exponential killing"));
    };
    let wh = wh_factors(&cfg.model, q, cfg.grid()?, &cfg.wh_options())?;
    let opts = DensityOptions {
        tol_mass: cfg.tolerances.tol_mass,
        clip_tol: cfg.extrema.clip_tol,
        ..DensityOptions::default()
    };
    let d = extrema_distributions(&wh, &cfg.extrema.x_grid(), &opts)?;
    let rows = (0..d.x_grid.len())
        .map(|i| vec![d.x_grid[i], d.pdf_sup[i], d.cdf_sup[i], d.pdf_inf[i], d.cdf_inf[i]])
        .collect();
    Ok(Outcome {
        code: EXIT_OK,
        summary: format!("mass sup {:.6}, mass inf {:.6}", d.mass_sup, d.mass_inf),
        diagnostics: json!({
            "mass_sup": d.mass_sup,
            "mass_inf": d.mass_inf,
            "negativity_sup": d.negativity_sup,
            "negativity_inf": d.negativity_inf,
            "atom_sup": d.atom_sup,
            "atom_inf": d.atom_inf,
            "cdf_defect_sup": d.cdf_defect_sup,
            "cdf_defect_inf": d.cdf_defect_inf,
            "product_residual": wh.product_residual,
            "pd_plus": wh.pd_plus,
            "pd_minus": wh.pd_minus,
            "leakage_plus": wh.leakage_plus,
            "leakage_minus": wh.leakage_minus,
        }),
        table: Some(Table {
            columns: vec!["x", "pdf_sup", "cdf_sup", "pdf_inf", "cdf_inf"],
            rows,
        }),
    })
}

/// Reads `x`, `cdf_sup`, `cdf_inf` columns by header name.
fn read_cdf_file(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::no_input(path, e))?;
    let bad = |m: String| CliError::usage(format!("malformed cdf file {}: {m}", path.display()));
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty".into()))?.split(',').map(str::trim).collect();
    let col = |name: &str| header.iter().position(|h| *h == name).ok_or_else(|| bad(format!("no column {name}")));
    let (ix, is, ii) = (col("x")?, col("cdf_sup")?, col("cdf_inf")?);
    let (mut xs, mut cs, mut ci) = (Vec::new(), Vec::new(), Vec::new());
    for (n, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let get = |i: usize| -> CliResult<f64> {
            cells
                .get(i)
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| bad(format!("row {}: bad value", n + 2)))
        };
        xs.push(get(ix)?);
        cs.push(get(is)?);
        ci.push(get(ii)?);
    }
    if xs.len() < 2 || xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("x must have at least two increasing values".into()));
    }
    Ok((xs, cs, ci))
}

fn interp_clamped(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let last = xs.len() - 1;
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    ys[i] + (x - xs[i]) / (xs[i + 1] - xs[i]) * (ys[i + 1] - ys[i])
}

fn cmd_simulate(cfg: &RunConfig) -> CliResult<Outcome> {
    // read the model cdf first so a missing file fails before simulating
    let model_cdf = cfg.simulate.cdf_file.as_deref().map(read_cdf_file).transpose()?;
    let sim = cfg.sim_config();
    let (m, i) = simulate_extrema(&sim)?;
    let (sigma_step, jumps_step) = sim.step_diagnostics();
    let mut diagnostics = json!({
        "n_paths": m.n,
        "mean_sup": m.mean(),
        "mean_inf": i.mean(),
        "sigma_sqrt_dt": sigma_step,
        "intensity_dt": jumps_step,
    });
    let mut summary = format!("{} paths, mean sup {:.4}, mean inf {:.4}", m.n, m.mean(), i.mean());
    if let Some((xs, cs, ci)) = &model_cdf {
        let ks_sup = ks_distance(&m, |x| interp_clamped(xs, cs, x));
        let ks_inf = ks_distance(&i, |x| interp_clamped(xs, ci, x));
        diagnostics["ks_sup"] = json!(ks_sup);
        diagnostics["ks_inf"] = json!(ks_inf);
        write!(summary, ", KS sup {ks_sup:.4}, KS inf {ks_inf:.4}").expect("writing to a String");
    }
    let n = m.n as f64;
    let rows = (0..m.n)
        .map(|k| vec![(k + 1) as f64 / n, m.sorted_samples[k], i.sorted_samples[k]])
        .collect();
    Ok(Outcome {
        code: EXIT_OK,
        summary,
        diagnostics,
        table: Some(Table { columns: vec!["ecdf", "sup", "inf"], rows }),
    })
}

fn cmd_dawson(cfg: &RunConfig) -> CliResult<Outcome> {
    let d = &cfg.dawson;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for s in &d.z {
        let z = parse_complex(s)?;
        let v = dawson_via_cardinal(z, d.h, d.n_terms)?;
        let r = dawson_reference(z);
        let diff = (v - r).norm();
        worst = worst.max(diff);
        rows.push(vec![z.re, z.im, v.re, v.im, r.re, r.im, diff]);
    }
    Ok(Outcome {
        code: EXIT_OK,
        summary: format!("{} points, max |difference| {worst:.3e}", rows.len()),
        diagnostics: json!({ "h": d.h, "n_terms": d.n_terms, "max_abs_diff": worst }),
        table: Some(Table {
            columns: vec!["re_z", "im_z", "re_cardinal", "im_cardinal", "re_reference", "im_reference", "abs_diff"],
            rows,
        }),
    })
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: &Cli) -> CliResult<i32> {
    let cfg = resolve_config(cli)?;
    let command = cli.command.name();
    let outcome = match cli.command {
        Command::CheckPd => cmd_check_pd(&cfg)?,
        Command::Decompose => cmd_decompose(&cfg)?,
        Command::Factorize => cmd_factorize(&cfg)?,
        Command::Extrema => cmd_extrema(&cfg)?,
        Command::Simulate { .. } => cmd_simulate(&cfg)?,
        Command::Dawson { .. } => cmd_dawson(&cfg)?,
    };
    let written = emit(&cfg, command, &outcome)?;
    println!("{command}: {}", outcome.summary);
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(outcome.code)
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        let cases = [
            ("1", C64::new(1.0, 0.0)),
            ("-2.5", C64::new(-2.5, 0.0)),
            ("1+0.5i", C64::new(1.0, 0.5)),
            ("1-0.5i", C64::new(1.0, -0.5)),
            ("-i", C64::new(0.0, -1.0)),
            ("2i", C64::new(0.0, 2.0)),
            ("1e-3+2e+1i", C64::new(1e-3, 20.0)),
        ];
        for (s, want) in cases {
            assert_eq!(parse_complex(s).unwrap(), want, "{s}");
        }
        for s in ["", "abc", "1+xi", "i1"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn default_config_validates_and_round_trips() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let toml_text = toml::to_string(&cfg).unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&toml_text).unwrap(), cfg);
        let json_text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&json_text).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("sead = 3").is_err());
        assert!(toml::from_str::<RunConfig>("[grid]\nh = 0.5\nn = 3").is_err());
    }

    #[test]
    fn x_grid_endpoints() {
        let g = ExtremaSpec::default().x_grid();
        assert_eq!(g.len(), 2001);
        assert!((g[2000] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let t = Table { columns: vec!["a"], rows: vec![vec![0.1]] };
        let csv = t.to_csv();
        let v: f64 = csv.lines().nth(1).unwrap().parse().unwrap();
        assert_eq!(v, 0.1);
        assert_eq!(csv, "a\n1.0000000000000001e-1\n");
    }
}
