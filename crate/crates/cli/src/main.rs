use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{error, info, warn};
use serde::Serialize;

use lmg_core::report::{
    field_grid, scaling_csv, sweep, sweep_csv, table1, ScalingReport, SlopeReport, SweepRow, FIT_WINDOW, SCHEMA_VERSION,
    SLOPE_TOL,
};
use lmg_core::{fit_slope, run_validation, LmgError, MeasureSeries, Phase, ScalingRun, Transform, ValidationOptions};

const EXIT_VALIDATION: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_CONFIG: u8 = 4;

/// Ground-state coherence and steered coherence of the LMG model.
///
/// Log level comes from LMG_LOG_LEVEL (error, warn, info, debug; default warn).
/// Exit codes: 0 success, 2 validation failure, 3 solver failure, 4 config error.
#[derive(Debug, Parser)]
#[command(name = "lmg", version)]
struct Cli {
    /// Worker threads [default: available cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every measure, its limit, EoF and discord over a field grid.
    Sweep(SweepArgs),
    /// Finite-size scaling of the six measures at one field.
    Scaling(ScalingArgs),
    /// Critical-point amplitudes a_z, a_xx, a_yy, a_zz.
    Table1(Table1Args),
    /// Run the oracle suites; exit 2 if any check fails.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Anisotropy γ in [0, 1].
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Single field value; overrides the grid.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    h_min: f64,
    #[arg(long, default_value_t = 2.0)]
    h_max: f64,
    #[arg(long, default_value_t = 0.05)]
    h_step: f64,
    /// System sizes: comma-separated, each an integer or 2^k; 2^a..2^b expands.
    #[arg(long, default_value = "2^12")]
    n_list: String,
    /// Output file [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct ScalingArgs {
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    #[arg(long, default_value = "2^8..2^16")]
    n_list: String,
    /// Points in the least-squares window.
    #[arg(long, default_value_t = FIT_WINDOW)]
    window: usize,
    /// Allowed |local slope − theory slope|.
    #[arg(long, default_value_t = SLOPE_TOL)]
    tolerance: f64,
    /// Per-N CSV [default: stdout]; with --format json the report goes here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the JSON slope report [default: stderr].
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Fit an injected c/N series instead of solving the model.
    #[arg(long)]
    toy: bool,
}

#[derive(Debug, Args)]
struct Table1Args {
    #[arg(long, default_value = "2^16")]
    n: String,
    /// Comma-separated anisotropies.
    #[arg(long, default_value = "0,0.25,0.5,0.75", value_delimiter = ',')]
    gamma: Vec<f64>,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Tolerance of the grid-search MSC suite; 1e-4 or more uses a coarse grid.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Perturb the M = N/2 Hamiltonian element (negative control).
    #[arg(long)]
    inject_fault: bool,
    /// Smaller grids and fewer random states.
    #[arg(long)]
    quick: bool,
    /// Seed of the random X states.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// JSON report [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Solver(LmgError),
    Io(io::Error),
}

impl From<LmgError> for CliError {
    fn from(e: LmgError) -> Self {
        match e {
            LmgError::InvalidParams(_)
            | LmgError::PhaseMismatch { .. }
            | LmgError::TooFewPoints { .. }
            | LmgError::UnorderedSeries
            | LmgError::Unsupported(_)
            | LmgError::FullSpaceTooLarge { .. } => CliError::Config(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Solver(e) => write!(f, "solver failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_size(s: &str) -> CliResult<usize> {
    let s = s.trim();
    let bad = || CliError::Config(format!("bad system size '{s}'"));
    match s.split_once('^') {
        Some((base, exp)) => {
            let base: usize = base.trim().parse().map_err(|_| bad())?;
            let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
            base.checked_pow(exp).ok_or_else(bad)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// "2^10,2^12", "256,1024" or "2^8..2^16" (every power of two in between).
fn parse_n_list(s: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (parse_size(lo)?, parse_size(hi)?);
                if !lo.is_power_of_two() || !hi.is_power_of_two() || lo > hi {
                    return Err(CliError::Config(format!("range '{item}' needs powers of two, low first")));
                }
                out.extend((lo.trailing_zeros()..=hi.trailing_zeros()).map(|k| 1usize << k));
            }
            None => out.push(parse_size(item)?),
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("empty --n-list".into()));
    }
    Ok(out)
}

fn check_increasing(ns: &[usize]) -> CliResult<()> {
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config("--n-list must be strictly increasing".into()));
    }
    Ok(())
}

/// Write through a temporary file in the same directory, then rename, so a
/// failed run never leaves a partial output behind.
fn write_output(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        None => {
            io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_file_name(format!(
                ".{}.{}.tmp",
                path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
                std::process::id()
            ));
            let result = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, path));
            if result.is_err() {
                let _ = fs::remove_file(&tmp);
            }
            Ok(result?)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SweepJson<'a> {
    schema_version: &'a str,
    rows: &'a [SweepRow],
}

fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    let ns = parse_n_list(&args.n_list)?;
    let hs = match args.h {
        Some(h) => vec![h],
        None => {
            if args.h_step.is_nan() || args.h_step <= 0.0 || args.h_max < args.h_min {
                return Err(CliError::Config("need h-step > 0 and h-max >= h-min".into()));
            }
            field_grid(args.h_min, args.h_max, args.h_step)
        }
    };
    info!("sweep: gamma={} {} fields x {} sizes", args.gamma, hs.len(), ns.len());
    let rows = sweep(args.gamma, &hs, &ns)?;
    for r in rows.iter().filter(|r| r.msc_degenerate) {
        warn!("N={} h={}: marginal is degenerate, MSC reported as the h -> 0+ limit", r.n, r.h);
    }
    let body = match args.format {
        Format::Csv => sweep_csv(&rows),
        Format::Json => to_json(&SweepJson { schema_version: SCHEMA_VERSION, rows: &rows }),
    };
    write_output(args.out.as_deref(), &body)
}

fn toy_report(ns: &[usize], window: usize, tolerance: f64) -> CliResult<ScalingReport> {
    let values: Vec<(u64, f64)> = ns.iter().map(|&n| (n as u64, 0.5 / n as f64)).collect();
    let series = MeasureSeries::new("toy", Phase::Broken, 0.0, 0.0, Transform::Raw, 0.0, &values)?;
    let fit = fit_slope(&series, window)?;
    let pass = (fit.final_local_slope + 1.0).abs() <= tolerance;
    Ok(ScalingReport {
        schema_version: SCHEMA_VERSION.into(),
        gamma: 0.0,
        h: 0.0,
        phase: "toy".into(),
        window,
        tolerance,
        measures: vec![(
            "toy".into(),
            SlopeReport {
                slope: fit.slope,
                local_slope: fit.final_local_slope,
                theory_slope: -1.0,
                transform: Transform::Raw.name().into(),
                pass,
            },
        )],
        pass,
    })
}

fn cmd_scaling(args: &ScalingArgs) -> CliResult<()> {
    let ns = parse_n_list(&args.n_list)?;
    check_increasing(&ns)?;
    if args.window < 3 || args.window > ns.len() {
        return Err(CliError::Config(format!("--window must be in 3..={}", ns.len())));
    }
    let (csv, report) = if args.toy {
        let report = toy_report(&ns, args.window, args.tolerance)?;
        let mut csv = String::from("n,measure,transform,value,transformed\n");
        for &n in &ns {
            let v = lmg_core::report::fmt_f64(0.5 / n as f64);
            csv.push_str(&format!("{n},toy,raw,{v},{v}\n"));
        }
        (csv, report)
    } else {
        let run = ScalingRun::compute(args.gamma, args.h, &ns)?;
        (scaling_csv(&run), ScalingReport::from_run(&run, args.window, args.tolerance)?)
    };
    for (name, r) in report.measures.iter().filter(|(_, r)| !r.pass) {
        warn!("{name}: local slope {:.4} vs theory {:.4}", r.local_slope, r.theory_slope);
    }
    let json = to_json(&report);
    match args.format {
        Format::Json => write_output(args.out.as_deref(), &json),
        Format::Csv => {
            write_output(args.out.as_deref(), &csv)?;
            match &args.report {
                Some(p) => write_output(Some(p), &json),
                None => {
                    io::stderr().write_all(json.as_bytes())?;
                    Ok(())
                }
            }
        }
    }
}

fn cmd_table1(args: &Table1Args) -> CliResult<()> {
    let n = parse_size(&args.n)?;
    let report = table1(&args.gamma, n)?;
    let body = match args.format {
        TableFormat::Text => report.render(),
        TableFormat::Json => to_json(&report),
    };
    write_output(args.out.as_deref(), &body)
}

fn cmd_validate(args: &ValidateArgs) -> CliResult<bool> {
    if let Some(t) = args.tolerance {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Config("--tolerance must be positive".into()));
        }
    }
    let opts = ValidationOptions { tolerance: args.tolerance, inject_fault: args.inject_fault, quick: args.quick, seed: args.seed };
    let report = run_validation(&opts)?;
    for s in &report.suites {
        eprintln!(
            "{} {:<28} {}/{} checks, worst error {:.2e}",
            if s.pass { "PASS" } else { "FAIL" },
            s.name,
            s.checks.len() - s.failures,
            s.checks.len(),
            s.worst_error
        );
    }
    write_output(args.out.as_deref(), &to_json(&report))?;
    Ok(report.pass)
}

fn init_logging() -> CliResult<()> {
    let level = std::env::var("LMG_LOG_LEVEL").unwrap_or_else(|_| "warn".into());
    if !["error", "warn", "info", "debug"].contains(&level.as_str()) {
        return Err(CliError::Config(format!("LMG_LOG_LEVEL '{level}' is not one of error, warn, info, debug")));
    }
    env_logger::Builder::new().parse_filters(&level).init();
    Ok(())
}

fn run(cli: &Cli) -> CliResult<bool> {
    init_logging()?;
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match &cli.command {
        Command::Sweep(a) => cmd_sweep(a).map(|_| true),
        Command::Scaling(a) => cmd_scaling(a).map(|_| true),
        Command::Table1(a) => cmd_table1(a).map(|_| true),
        Command::Validate(a) => cmd_validate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VALIDATION),
        Err(e) => {
            error!("{e}");
            eprintln!("lmg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
