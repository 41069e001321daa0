//! Command-line front end: `sweep`, `scaling`, `oracle` and `plot`.
//!
//! Exit status is 0 on success, 1 for usage errors (bad flags, bad config,
//! unreadable or unwritable paths) and 2 for numerical failures or failed
//! oracle checks.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::Error;
use crate::oracle::{run_suite, Fault, OracleCheck};
use crate::phase::SystemSize;
use crate::pipeline::{run_scaling, ScalingModel, DEFAULT_SIZES};
use crate::svg::render_svg;
use crate::sweep::{parse_sizes, parse_values, run_sweep, SweepModel, SweepSpec, Table};

#[derive(Parser, Debug)]
#[command(name = "qpt-geom", version, about = "Ground-state geometric phases and finite-size scaling near quantum phase transitions")]
pub struct Cli {
    /// Worker threads for grid evaluation [default: all cores]
    #[arg(long, global = true, env = "QPT_GEOM_THREADS")]
    threads: Option<usize>,

    /// TOML file supplying option defaults; command-line flags win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a model over a parameter grid
    Sweep(SweepArgs),
    /// Peak tables, log-divergence coefficients and critical exponents
    Scaling(ScalingArgs),
    /// Compare analytic results against brute-force oracles
    Oracle(OracleArgs),
    /// Render a sweep CSV as an SVG line plot
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Inject {
    DerivativeSign,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// xy, dicke, lmg or probe [default: xy]
    #[arg(long)]
    model: Option<String>,
    /// Anisotropy values: list `0,0.5,1` or range `a:b:steps`
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Transverse field grid `a:b:steps` (xy, probe)
    #[arg(long = "lambda-range", allow_hyphen_values = true)]
    lambda_range: Option<String>,
    /// Test-qubit z field (probe)
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Test-qubit x field (probe)
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Qubit-ring coupling (probe)
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Dimensionless atomic splitting D (dicke)
    #[arg(long = "d")]
    d: Option<String>,
    /// Coupling ratio grid `a:b:steps` (dicke)
    #[arg(long = "alpha-range")]
    alpha_range: Option<String>,
    /// Field grid `a:b:steps` (lmg)
    #[arg(long = "h-range")]
    h_range: Option<String>,
    /// System sizes, e.g. `21,101,inf`
    #[arg(long)]
    sizes: Option<String>,
    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format [default: from the file extension, else csv]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Column plotted when the format is svg
    #[arg(long)]
    y: Option<String>,
}

#[derive(Args, Debug)]
struct ScalingArgs {
    /// xy or probe [default: xy]
    #[arg(long)]
    model: Option<String>,
    /// Ring anisotropy [default: 1]
    #[arg(long)]
    gamma: Option<String>,
    /// Sizes for the peak table [default: 21,101,501,1001,5001,10001]
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json report or csv peak table [default: json]
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv [default: plain-text table]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Plant a known defect to confirm the checks catch it
    #[arg(long, value_enum, hide = true)]
    inject: Option<Inject>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Sweep CSV to render
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output SVG [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output column on the vertical axis [default: last column]
    #[arg(long)]
    y: Option<String>,
}

/// Values accepted in the TOML config: strings, numbers or arrays of them.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ConfigValue {
    Int(i64),
    Float(f64),
    Text(String),
    List(Vec<ConfigScalar>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ConfigScalar {
    Int(i64),
    Float(f64),
    Text(String),
}

impl ConfigScalar {
    fn text(&self) -> String {
        match self {
            ConfigScalar::Int(i) => i.to_string(),
            ConfigScalar::Float(f) => f.to_string(),
            ConfigScalar::Text(s) => s.clone(),
        }
    }
}

impl ConfigValue {
    fn text(&self) -> String {
        match self {
            ConfigValue::Int(i) => i.to_string(),
            ConfigValue::Float(f) => f.to_string(),
            ConfigValue::Text(s) => s.clone(),
            ConfigValue::List(v) => v.iter().map(ConfigScalar::text).collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    threads: Option<usize>,
    model: Option<String>,
    gamma: Option<ConfigValue>,
    #[serde(alias = "lambda_range")]
    lambda_range: Option<String>,
    mu: Option<ConfigValue>,
    nu: Option<ConfigValue>,
    eta: Option<ConfigValue>,
    d: Option<ConfigValue>,
    #[serde(alias = "alpha_range")]
    alpha_range: Option<String>,
    #[serde(alias = "h_range")]
    h_range: Option<String>,
    sizes: Option<ConfigValue>,
    out: Option<PathBuf>,
    format: Option<String>,
    y: Option<String>,
    input: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::InsufficientData(_) | Error::TooLarge { .. } | Error::RankDeficient(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// Parse arguments, run the command and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            2
        }
    }
}

fn load_config(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).or_else(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).or_else(|e| usage(format!("invalid config {}: {e}", path.display())))
}

fn execute(cli: Cli) -> CliResult<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.threads.or(cfg.threads) {
        Some(0) => usage("--threads must be at least 1"),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .or_else(|e| usage(format!("cannot start {k} threads: {e}")))?;
            pool.install(|| dispatch(cli.command, &cfg))
        }
        None => dispatch(cli.command, &cfg),
    }
}

fn dispatch(command: Command, cfg: &FileConfig) -> CliResult<()> {
    match command {
        Command::Sweep(a) => cmd_sweep(a, cfg),
        Command::Scaling(a) => cmd_scaling(a, cfg),
        Command::Oracle(a) => cmd_oracle(a, cfg),
        Command::Plot(a) => cmd_plot(a, cfg),
    }
}

fn merged(flag: Option<String>, cfg: &Option<ConfigValue>) -> Option<String> {
    flag.or_else(|| cfg.as_ref().map(ConfigValue::text))
}

fn values(flag: &str, spec: Option<String>) -> CliResult<Option<Vec<f64>>> {
    spec.map(|s| parse_values(&s).or_else(|e| usage(format!("--{flag}: {e}")))).transpose()
}

fn single(flag: &str, spec: Option<String>, default: f64) -> CliResult<f64> {
    match spec {
        None => Ok(default),
        Some(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => usage(format!("--{flag} expects a single finite number (got {s:?})")),
        },
    }
}

fn resolve_format(flag: Option<Format>, cfg: &FileConfig, out: Option<&Path>) -> CliResult<Option<Format>> {
    if flag.is_some() {
        return Ok(flag);
    }
    if let Some(f) = &cfg.format {
        return Format::from_str(f, true).map(Some).or_else(|_| usage(format!("config: unknown format {f:?}")));
    }
    Ok(out.and_then(|p| p.extension()).and_then(|e| Format::from_str(&e.to_string_lossy(), true).ok()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).or_else(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).or_else(|e| usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn cmd_sweep(a: SweepArgs, cfg: &FileConfig) -> CliResult<()> {
    let model_name = a.model.or_else(|| cfg.model.clone()).unwrap_or_else(|| "xy".into());
    let model: SweepModel = model_name.parse().or_else(|e: String| usage(e))?;
    let mut spec = SweepSpec::new(model);
    if let Some(v) = values("gamma", merged(a.gamma, &cfg.gamma))? {
        spec.gamma = v;
    }
    if let Some(v) = values("lambda-range", a.lambda_range.or_else(|| cfg.lambda_range.clone()))? {
        spec.lambda = v;
    }
    if let Some(v) = values("mu", merged(a.mu, &cfg.mu))? {
        spec.mu = v;
    }
    if let Some(v) = values("nu", merged(a.nu, &cfg.nu))? {
        spec.nu = v;
    }
    if let Some(v) = values("eta", merged(a.eta, &cfg.eta))? {
        spec.eta = v;
    }
    if let Some(v) = values("d", merged(a.d, &cfg.d))? {
        spec.d = v;
    }
    if let Some(v) = values("alpha-range", a.alpha_range.or_else(|| cfg.alpha_range.clone()))? {
        spec.alpha = v;
    }
    if let Some(v) = values("h-range", a.h_range.or_else(|| cfg.h_range.clone()))? {
        spec.h = v;
    }
    if let Some(s) = merged(a.sizes, &cfg.sizes) {
        spec.sizes = parse_sizes(&s).or_else(|e| usage(format!("--sizes: {e}")))?;
    }
    let out = a.out.or_else(|| cfg.out.clone());
    let format = resolve_format(a.format, cfg, out.as_deref())?.unwrap_or(Format::Csv);
    let y = a.y.or_else(|| cfg.y.clone());
    spec.validate()?;

    let table = run_sweep(&spec)?;
    let bytes = match format {
        Format::Csv => table.to_csv_string().into_bytes(),
        Format::Json => (serde_json::to_string_pretty(&table.to_json()).expect("JSON values serialize") + "\n").into_bytes(),
        Format::Svg => render_svg(&table, y.as_deref())?.into_bytes(),
    };
    emit(out.as_deref(), &bytes)
}

fn cmd_scaling(a: ScalingArgs, cfg: &FileConfig) -> CliResult<()> {
    let model_name = a.model.or_else(|| cfg.model.clone()).unwrap_or_else(|| "xy".into());
    let gamma = single("gamma", merged(a.gamma, &cfg.gamma), 1.0)?;
    if gamma < 0.0 {
        return usage(format!("--gamma must be ≥ 0 (got {gamma})"));
    }
    let model = match model_name.trim().to_ascii_lowercase().as_str() {
        "xy" => ScalingModel::Xy { gamma },
        "probe" => ScalingModel::Probe {
            mu: single("mu", merged(a.mu, &cfg.mu), 0.1)?,
            nu: single("nu", merged(a.nu, &cfg.nu), 2.0)?,
            eta: single("eta", merged(a.eta, &cfg.eta), 0.5)?,
            gamma,
        },
        other => return usage(format!("scaling supports the xy and probe models (got {other:?})")),
    };
    let sizes: Vec<usize> = match merged(a.sizes, &cfg.sizes) {
        None => DEFAULT_SIZES.to_vec(),
        Some(s) => parse_sizes(&s)
            .or_else(|e| usage(format!("--sizes: {e}")))?
            .into_iter()
            .map(|s| match s {
                SystemSize::Finite(n) => Ok(n),
                SystemSize::Thermodynamic => usage("--sizes: scaling needs finite sizes"),
            })
            .collect::<CliResult<_>>()?,
    };
    let out = a.out.or_else(|| cfg.out.clone());
    let format = resolve_format(a.format, cfg, out.as_deref())?.unwrap_or(Format::Json);

    let report = run_scaling(&model, &sizes)?;
    let bytes = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("n,lambda_m,height,height_over_pi\n");
            for p in &report.peaks {
                let _ = writeln!(s, "{},{:.16e},{:.16e},{:.16e}", p.n, p.lambda_m, p.height, p.height_over_pi);
            }
            s
        }
        Format::Svg => return usage("scaling output is json or csv"),
    };
    emit(out.as_deref(), bytes.as_bytes())
}

fn checks_as_text(checks: &[OracleCheck]) -> String {
    let mut s = format!("{:<6} {:<34} {:>12} {:>12}\n", "status", "check", "max_error", "tolerance");
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{status:<6} {:<34} {:>12.3e} {:>12.3e}", c.name, c.max_error, c.tolerance);
    }
    s
}

fn cmd_oracle(a: OracleArgs, cfg: &FileConfig) -> CliResult<()> {
    let fault = a.inject.map(|Inject::DerivativeSign| Fault::DerivativeSign);
    let out = a.out.or_else(|| cfg.out.clone());
    let format = resolve_format(a.format, cfg, out.as_deref())?;
    let checks = run_suite(fault)?;
    let text = match format {
        None => checks_as_text(&checks),
        Some(Format::Json) => serde_json::to_string_pretty(&checks).expect("checks serialize") + "\n",
        Some(Format::Csv) => {
            let mut s = String::from("name,max_error,tolerance,passed\n");
            for c in &checks {
                let _ = writeln!(s, "{},{:.16e},{:.16e},{}", c.name, c.max_error, c.tolerance, c.passed);
            }
            s
        }
        Some(Format::Svg) => return usage("oracle output is text, json or csv"),
    };
    emit(out.as_deref(), text.as_bytes())?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("oracle checks failed: {}", failed.join(", "))))
    }
}

fn cmd_plot(a: PlotArgs, cfg: &FileConfig) -> CliResult<()> {
    let Some(input) = a.input.or_else(|| cfg.input.clone()) else {
        return usage("plot needs --input FILE");
    };
    let file = std::fs::File::open(&input).or_else(|e| usage(format!("cannot open {}: {e}", input.display())))?;
    let table = Table::read_csv(file).or_else(|e| usage(format!("{}: {e}", input.display())))?;
    let svg = render_svg(&table, a.y.or_else(|| cfg.y.clone()).as_deref())?;
    emit(a.out.or_else(|| cfg.out.clone()).as_deref(), svg.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parser_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["qpt-geom", "sweep", "--format", "xml"]), 1);
        assert_eq!(run(["qpt-geom", "bogus"]), 1);
        assert_eq!(run(["qpt-geom", "sweep", "--model", "nope"]), 1);
        assert_eq!(run(["qpt-geom", "sweep", "--sizes", "20"]), 1);
        assert_eq!(run(["qpt-geom", "scaling", "--sizes", "21,101,501"]), 1);
        assert_eq!(run(["qpt-geom", "plot"]), 1);
    }

    #[test]
    fn config_values_accept_numbers_and_lists() {
        let cfg: FileConfig = toml::from_str("gamma = [0, 0.5]\nsizes = [21, \"inf\"]\nmu = 0.25\nlambda-range = \"0:1:3\"").unwrap();
        assert_eq!(cfg.gamma.unwrap().text(), "0,0.5");
        assert_eq!(cfg.sizes.unwrap().text(), "21,inf");
        assert_eq!(cfg.mu.unwrap().text(), "0.25");
        assert!(toml::from_str::<FileConfig>("unknown = 1").is_err());
    }
}
