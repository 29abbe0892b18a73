//! Batch front door for the `ckh` binary: scenario configuration, dispatch,
//! report JSON and CSV tables.
//!
//! Precedence is flags, then the `--config` JSON file, then defaults. The
//! full resolved configuration is echoed into every report.

mod ops;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "CKH_SEED";

#[derive(Parser, Clone, Debug, Serialize)]
#[command(name = "ckh", version, about = "Monomial series, CK solving and Wiener-space identity checks")]
pub struct ScenarioConfig {
    /// JSON object of option values; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report path; stdout when omitted.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Optional CSV table (partial sums, coefficients, moments).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 42)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Euler product over the first primes against the direct partial sum.
    Zeta(ZetaArgs),
    /// Solve a problem file to a total degree.
    Solve(SolveArgs),
    /// Majorant radius of a linear first-order problem.
    Radius(RadiusArgs),
    /// Randomized norm and metric property suite.
    TopologyCheck(TopologyArgs),
    /// Weight scheme search for a linear problem.
    Weights(WeightsArgs),
    /// Gaussian divergence identity on a box or on H_λ.
    DivergenceCheck(DivergenceArgs),
    /// Green identity with U = t' − Σx'² and W ∈ {1, x_1, ..}.
    GreenCheck(GreenArgs),
    /// Moments of Ũ on l_λ through the Green identity and directly.
    HolmgrenDemo(HolmgrenArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Zeta(_) => "zeta",
            Command::Solve(_) => "solve",
            Command::Radius(_) => "radius",
            Command::TopologyCheck(_) => "topology-check",
            Command::Weights(_) => "weights",
            Command::DivergenceCheck(_) => "divergence-check",
            Command::GreenCheck(_) => "green-check",
            Command::HolmgrenDemo(_) => "holmgren-demo",
        }
    }
}

#[derive(Args, Clone, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct ZetaArgs {
    #[arg(long, default_value_t = 3.0)]
    pub s: f64,
    #[arg(long, default_value_t = 100)]
    pub primes: usize,
    /// Total degree of the geometric expansion; 0 picks one from `tol`.
    #[arg(long, default_value_t = 0)]
    pub cap: u32,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Number of terms of the direct sum Σ n^{-s}.
    #[arg(long, default_value_t = 1_000_000)]
    pub direct_terms: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Double,
}

#[derive(Args, Clone, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub degree: u32,
    #[arg(long, value_enum, default_value_t = Mode::Double)]
    pub mode: Mode,
    /// Solution series JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest residual coefficient accepted in double mode.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct RadiusArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Point-oracle JSON; defaults to x_i = 2^{i+1}.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Degree of the majorant partial sums.
    #[arg(long, default_value_t = 12)]
    pub cap: u32,
    /// Degree of the solve used for the ratio test.
    #[arg(long, default_value_t = 10)]
    pub degree: u32,
}

#[derive(Args, Clone, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct TopologyArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Args, Clone, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct WeightsArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// Geometric pattern JSON; the shipped pattern when omitted.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    HLambda,
    Box,
}

#[derive(Args, Clone, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct DivergenceArgs {
    /// Number of x-variables for H_λ, box dimension otherwise.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.25)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long)]
    pub quadrature: bool,
    /// Quadrature pass threshold on |residual|.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = DomainKind::HLambda)]
    pub domain: DomainKind,
    /// Constant coefficient a_1 behind the H_λ field.
    #[arg(long, default_value_t = 1.0)]
    pub a1: f64,
    /// Truncation degree of the transformed coefficients.
    #[arg(long, default_value_t = 8)]
    pub degree: u32,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lo: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub hi: Vec<f64>,
    /// Box field: JSON list of series, one component per coordinate.
    #[arg(long)]
    pub field: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct GreenArgs {
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.25)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long)]
    pub quadrature: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a1: f64,
    #[arg(long, default_value_t = 8)]
    pub degree: u32,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
}

#[derive(Args, Clone, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct HolmgrenArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// Problems with fewer x-variables are padded with zero coefficients.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    #[arg(long, default_value_t = 4)]
    pub max_moment: u32,
    #[arg(long, default_value_t = 8)]
    pub degree: u32,
    #[arg(long)]
    pub quadrature: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Series JSON over (t, x1..xn) used in place of the transformed solution.
    #[arg(long)]
    pub u_tilde: Option<PathBuf>,
}

/// Named real columns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub op: String,
    pub inputs: serde_json::Value,
    pub seed: u64,
    pub rng: String,
    pub n: usize,
    pub samples: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub stderr: f64,
    pub pass: bool,
    pub results: serde_json::Value,
    pub version: String,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub table: Option<Table>,
}

/// Fields a command fills in; [`run`] adds the echo, version and timing.
pub(crate) struct Outcome {
    pub n: usize,
    pub samples: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub stderr: f64,
    pub pass: bool,
    pub results: serde_json::Value,
    pub table: Option<Table>,
}

impl ScenarioConfig {
    /// Parses `args` (program name first), folding in `--config` values
    /// behind the explicit flags.
    pub fn from_args<I, T>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
        let first = ScenarioConfig::try_parse_from(&args)?;
        let Some(path) = &first.config else { return Ok(first) };
        let extra = config_tokens(path).map_err(|e| {
            clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("--config {}: {e}\n", path.display()))
        })?;
        let name = first.command.name();
        let at = args.iter().position(|a| a.to_str() == Some(name)).map_or(args.len(), |p| p + 1);
        let mut merged = args[..at].to_vec();
        merged.extend(extra);
        merged.extend_from_slice(&args[at..]);
        ScenarioConfig::try_parse_from(merged)
    }

    fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::parse(name, format!("must be positive and finite, got {v}")))
            }
        };
        let atleast = |name: &str, v: usize, m: usize| {
            if v >= m {
                Ok(())
            } else {
                Err(Error::parse(name, format!("must be at least {m}, got {v}")))
            }
        };
        match &self.command {
            Command::Zeta(a) => {
                if !(a.s > 1.0) {
                    return Err(Error::parse("s", format!("must exceed 1, got {}", a.s)));
                }
                atleast("primes", a.primes, 1)?;
                atleast("direct-terms", a.direct_terms as usize, 1)?;
                pos("tol", a.tol)
            }
            Command::Solve(a) => pos("tol", a.tol),
            Command::Radius(a) => {
                if !(a.p > 0.0) {
                    return Err(Error::parse("p", "must be positive"));
                }
                Ok(())
            }
            Command::TopologyCheck(a) => atleast("trials", a.trials, 1),
            Command::Weights(_) => Ok(()),
            Command::DivergenceCheck(a) => {
                atleast("dim", a.dim, 1)?;
                atleast("samples", a.samples, 2)?;
                pos("lambda", a.lambda)?;
                pos("tol", a.tol)?;
                pos("t", a.t)
            }
            Command::GreenCheck(a) => {
                atleast("dim", a.dim, 1)?;
                atleast("samples", a.samples, 2)?;
                pos("lambda", a.lambda)?;
                pos("tol", a.tol)?;
                pos("t", a.t)
            }
            Command::HolmgrenDemo(a) => {
                atleast("dim", a.dim, 1)?;
                atleast("samples", a.samples, 2)?;
                pos("lambda", a.lambda)?;
                pos("tol", a.tol)?;
                pos("t", a.t)
            }
        }
    }
}

fn config_tokens(path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    let obj = v.as_object().ok_or_else(|| Error::parse("config", "expected a JSON object"))?;
    let mut out = Vec::new();
    for (k, v) in obj {
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            serde_json::Value::Bool(true) => out.push(flag.into()),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::String(s) => out.push(format!("{flag}={s}").into()),
            serde_json::Value::Number(n) => out.push(format!("{flag}={n}").into()),
            serde_json::Value::Array(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                out.push(format!("{flag}={}", parts.join(",")).into());
            }
            serde_json::Value::Object(_) => return Err(Error::parse(k, "nested objects are not options")),
        }
    }
    Ok(out)
}

/// Validates the configuration and dispatches to the owning module.
pub fn run(config: &ScenarioConfig) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let seed = config.seed;
    let o = match &config.command {
        Command::Zeta(a) => ops::zeta(a)?,
        Command::Solve(a) => ops::solve(a)?,
        Command::Radius(a) => ops::radius(a)?,
        Command::TopologyCheck(a) => ops::topology(a, seed)?,
        Command::Weights(a) => ops::weights(a)?,
        Command::DivergenceCheck(a) => ops::divergence(a, seed)?,
        Command::GreenCheck(a) => ops::green(a, seed)?,
        Command::HolmgrenDemo(a) => ops::holmgren(a, seed)?,
    };
    Ok(RunReport {
        op: config.command.name().into(),
        inputs: serde_json::to_value(config)?,
        seed,
        rng: crate::wiener::RNG_NAME.into(),
        n: o.n,
        samples: o.samples,
        lhs: o.lhs,
        rhs: o.rhs,
        residual: o.residual,
        stderr: o.stderr,
        pass: o.pass,
        results: o.results,
        version: env!("CARGO_PKG_VERSION").into(),
        wall_time_s: start.elapsed().as_secs_f64(),
        table: o.table,
    })
}

/// Writes `table` as CSV with a header row; numbers use the shortest
/// round-trip decimal form.
pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    let width = table.columns.len();
    if let Some(bad) = table.rows.iter().position(|r| r.len() != width) {
        return Err(Error::Precondition(format!("row {bad} has {} cells, header has {width}", table.rows[bad].len())));
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format!("{v:?}")))?;
    }
    w.flush()?;
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Json(_)
        | Error::Io(_)
        | Error::Csv(_)
        | Error::UnknownVariable(_)
        | Error::SpaceMismatch { .. }
        | Error::Precondition(_)
        | Error::Quadrature(_)
        | Error::SizeOverflow { .. } => EXIT_CONFIG,
        _ => EXIT_TOLERANCE,
    }
}

/// Full binary behaviour; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match ScenarioConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(e) = write_outputs(&config, &report) {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    if report.pass {
        EXIT_PASS
    } else {
        eprintln!("{}: tolerance check failed (residual {:e})", report.op, report.residual);
        EXIT_TOLERANCE
    }
}

fn write_outputs(config: &ScenarioConfig, report: &RunReport) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match &config.report {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    if let (Some(p), Some(t)) = (&config.csv, &report.table) {
        emit_csv(t, p)?;
    }
    Ok(())
}
