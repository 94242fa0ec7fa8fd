//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a validated object failed its checks, 2 bad
//! configuration, 3 numerical failure, 4 `--check-paper` mismatch.
//! `BAKERLAB_THREADS` sets the worker thread count.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::BivariateCdf;
use crate::copulas::{validate_copula, Copula, DependenceClass, ExtremeVariant, OsKernel};
use crate::correlation::{
    build_family, convergence_series, correlation_table, pearson_rho, Family, MarginalPair, QuadratureSettings,
    TableCell,
};
use crate::error::Error;
use crate::marginals::Marginal;
use crate::reference::{published_rho, PUBLISHED_TOLERANCE, TABLE_FAMILIES, TABLE_N};
use crate::sampler::{mc_correlation, sample_family, write_samples_csv, SamplerConfig, MIN_MC_SAMPLE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_PAPER_MISMATCH: i32 = 4;

pub const THREADS_ENV: &str = "BAKERLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "bakerlab",
    version,
    about = "Baker-type bivariate distributions: correlations, validation, sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correlation table over families and n.
    Table(TableArgs),
    /// Correlation of a single construction.
    Corr(CorrArgs),
    /// Check the copula axioms of a copula or construction.
    Validate(ValidateArgs),
    /// Draw a Monte Carlo sample and estimate its correlation.
    Sample(SampleArgs),
    /// Correlation as a function of n.
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelName {
    Fgm,
    Product,
    Gumbel,
    FrechetUpper,
    FrechetLower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CopulaName {
    Fgm,
    Product,
    Gumbel,
    FrechetUpper,
    FrechetLower,
    Osmax,
    Osmin,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QuadArgs {
    #[arg(long, default_value_t = 128)]
    nodes: usize,
    #[arg(long, default_value_t = 3)]
    refinement_limit: usize,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

impl QuadArgs {
    fn settings(&self) -> Result<QuadratureSettings, Error> {
        QuadratureSettings::new(self.nodes, self.refinement_limit, self.tolerance)
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (-1.0..=1.0).contains(&a) {
        Ok(a)
    } else {
        Err(format!("alpha must lie in [-1, 1], got {a}"))
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_marginals(s: &str) -> Result<MarginalPair, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_parser = parse_marginals, default_value = "unif-unif")]
    marginals: MarginalPair,
    #[arg(long, value_parser = parse_alpha, default_value = "1", allow_hyphen_values = true)]
    alpha: f64,
    /// Comma-separated sample sizes.
    #[arg(long = "n", value_delimiter = ',', default_values_t = TABLE_N)]
    ns: Vec<usize>,
    /// Comma-separated families; all six by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_family)]
    families: Vec<Family>,
    /// Compare every cell with the published tables.
    #[arg(long)]
    check_paper: bool,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CorrArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_enum, default_value = "fgm")]
    kernel: KernelName,
    #[arg(long, value_parser = parse_alpha, default_value = "1", allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_marginals, default_value = "unif-unif")]
    marginals: MarginalPair,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Copula to check. With `--family`, the kernel of that construction.
    #[arg(long, value_enum, default_value = "fgm")]
    copula: CopulaName,
    /// Kernel of an `osmax`/`osmin` copula.
    #[arg(long, value_enum, default_value = "fgm")]
    kernel: KernelName,
    #[arg(long, value_parser = parse_alpha, default_value = "1", allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Validate this construction (mapped to the unit square) instead of a bare copula.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, value_parser = parse_marginals, default_value = "unif-unif")]
    marginals: MarginalPair,
    #[arg(long, default_value_t = 256)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_enum, default_value = "fgm")]
    kernel: KernelName,
    #[arg(long, value_parser = parse_alpha, default_value = "1", allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_marginals, default_value = "unif-unif")]
    marginals: MarginalPair,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// File for the sample; the estimate then goes to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_parser = parse_alpha, default_value = "1", allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, value_parser = parse_marginals, default_value = "unif-unif")]
    marginals: MarginalPair,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 1)]
    step: usize,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Unsupported(_) | Error::Io(_) | Error::Csv(_) => EXIT_CONFIG,
            Error::Convergence { .. }
            | Error::QuadratureNonConvergence { .. }
            | Error::Invariant(_)
            | Error::DegenerateSample(_) => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

fn config_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(pool) => pool,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let result = match pool {
        Some(pool) => pool.install(|| dispatch(cli.command, out, err)),
        None => dispatch(cli.command, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary: process arguments and standard streams.
pub fn main_entry() -> i32 {
    let mut out = BufWriter::new(io::stdout());
    let mut err = io::stderr();
    let code = run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| config_failure(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| config_failure(e.to_string()))
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Table(a) => cmd_table(a, out, err),
        Command::Corr(a) => cmd_corr(a, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::Sample(a) => cmd_sample(a, out, err),
        Command::Converge(a) => cmd_converge(a, out, err),
    }
}

/// Writes rows as CSV (header from field names) or as a JSON array.
fn emit<R: Serialize>(rows: &[R], output: &OutputArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mut file;
    let sink: &mut dyn Write = match &output.output {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => out,
    };
    match output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            for row in rows {
                w.serialize(row).map_err(Error::from)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *sink, rows)?;
            writeln!(sink)?;
            sink.flush()?;
        }
    }
    Ok(())
}

/// The kernel for `family`. FGM follows the table convention of negating
/// `alpha` for the `-` families; other kernels are used as named.
fn family_kernel(family: Family, kernel: KernelName, alpha: f64) -> Result<Copula, Error> {
    match kernel {
        KernelName::Fgm => family.table_kernel(alpha),
        KernelName::Product => Ok(Copula::Product),
        KernelName::Gumbel => Ok(Copula::GumbelLogistic),
        KernelName::FrechetUpper => Ok(Copula::FrechetUpper),
        KernelName::FrechetLower => Ok(Copula::FrechetLower),
    }
}

fn check_n(n: usize) -> Result<(), Failure> {
    if n == 0 {
        Err(config_failure("n must be at least 1"))
    } else {
        Ok(())
    }
}

fn cmd_table(a: TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if a.ns.is_empty() {
        return Err(config_failure("no values of n given"));
    }
    for &n in &a.ns {
        check_n(n)?;
    }
    let families = if a.families.is_empty() {
        TABLE_FAMILIES.to_vec()
    } else {
        a.families.clone()
    };
    let settings = a.quad.settings()?;
    let cells = correlation_table(&families, &a.ns, a.alpha, a.marginals, &settings)?;
    emit(&cells, &a.output, out)?;

    if !a.check_paper {
        return Ok(EXIT_OK);
    }
    let check = check_against_published(&cells);
    for c in &check.missing {
        writeln!(
            err,
            "no published value for {} n={} alpha={} {}",
            c.family, c.n, c.alpha, c.marginals
        )?;
    }
    for (c, want) in &check.mismatches {
        writeln!(
            err,
            "mismatch: {} n={} {}: computed {:.6}, published {want:.4}",
            c.family, c.n, c.marginals, c.rho
        )?;
    }
    writeln!(
        err,
        "check-paper: {} compared, {} mismatched (tolerance {PUBLISHED_TOLERANCE})",
        check.compared,
        check.mismatches.len()
    )?;
    Ok(if check.mismatches.is_empty() {
        EXIT_OK
    } else {
        EXIT_PAPER_MISMATCH
    })
}

/// Comparison of computed cells with the published tables.
#[derive(Debug, Clone, Default)]
pub struct PublishedCheck {
    pub compared: usize,
    /// Cells off by more than the tolerance, with the published value.
    pub mismatches: Vec<(TableCell, f64)>,
    /// Cells with no published counterpart.
    pub missing: Vec<TableCell>,
}

pub fn check_against_published(cells: &[TableCell]) -> PublishedCheck {
    let mut check = PublishedCheck::default();
    for c in cells {
        match published_rho(c.family, c.n, c.alpha, c.marginals) {
            Some(want) => {
                check.compared += 1;
                if (c.rho - want).abs() > PUBLISHED_TOLERANCE {
                    check.mismatches.push((*c, want));
                }
            }
            None => check.missing.push(*c),
        }
    }
    check
}

#[derive(Serialize)]
struct CorrRow {
    family: Family,
    n: usize,
    kernel: String,
    marginals: MarginalPair,
    rho: f64,
    err_est: f64,
    nodes: usize,
}

fn cmd_corr(a: CorrArgs, out: &mut dyn Write) -> CmdResult {
    check_n(a.n)?;
    let settings = a.quad.settings()?;
    let kernel = family_kernel(a.family, a.kernel, a.alpha)?;
    let label = kernel.label();
    let dist = build_family(a.family, a.n, kernel, a.marginals)?;
    let r = pearson_rho(&dist, &settings)?;
    let row = CorrRow {
        family: a.family,
        n: a.n,
        kernel: label,
        marginals: a.marginals,
        rho: r.rho,
        err_est: r.abs_error_estimate,
        nodes: r.nodes_used,
    };
    emit(&[row], &a.output, out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ValidateRow {
    object: String,
    grid_size: usize,
    max_boundary_violation: f64,
    min_rectangle_volume: f64,
    max_frechet_violation: f64,
    classification: DependenceClass,
    pass: bool,
}

fn os_kernel(kernel: KernelName, alpha: f64) -> Result<OsKernel, Error> {
    let numeric = |c: Copula| OsKernel::GeneralNumeric {
        underlying: Box::new(c),
        marg_x: Marginal::Uniform01,
        marg_y: Marginal::Uniform01,
    };
    Ok(match kernel {
        KernelName::Fgm => {
            Copula::fgm(alpha)?;
            OsKernel::Fgm { alpha }
        }
        KernelName::Gumbel => OsKernel::GumbelLogistic,
        KernelName::Product => numeric(Copula::Product),
        KernelName::FrechetUpper => numeric(Copula::FrechetUpper),
        KernelName::FrechetLower => numeric(Copula::FrechetLower),
    })
}

fn named_copula(a: &ValidateArgs) -> Result<Copula, Error> {
    match a.copula {
        CopulaName::Fgm => Copula::fgm(a.alpha),
        CopulaName::Product => Ok(Copula::Product),
        CopulaName::Gumbel => Ok(Copula::GumbelLogistic),
        CopulaName::FrechetUpper => Ok(Copula::FrechetUpper),
        CopulaName::FrechetLower => Ok(Copula::FrechetLower),
        CopulaName::Osmax => Copula::order_stat(ExtremeVariant::MaxMax, a.n, os_kernel(a.kernel, a.alpha)?),
        CopulaName::Osmin => Copula::order_stat(ExtremeVariant::MinMin, a.n, os_kernel(a.kernel, a.alpha)?),
    }
}

fn cmd_validate(a: ValidateArgs, out: &mut dyn Write) -> CmdResult {
    check_n(a.n)?;
    let copula = named_copula(&a)?;
    let (object, report) = match a.family {
        None => (copula.label(), validate_copula(&copula, a.grid)?),
        Some(family) => {
            let kernel = match copula {
                Copula::Fgm { .. } => family.table_kernel(a.alpha)?,
                other => other,
            };
            let dist: BivariateCdf = build_family(family, a.n, kernel, a.marginals)?;
            let report = validate_copula(&dist.on_unit_square(), a.grid)?;
            (format!("{} {}", dist.label(), a.marginals), report)
        }
    };
    let pass = report.is_copula() && report.frechet_ok();
    let row = ValidateRow {
        object,
        grid_size: report.grid_size,
        max_boundary_violation: report.max_boundary_violation,
        min_rectangle_volume: report.min_rectangle_volume,
        max_frechet_violation: report.max_frechet_violation,
        classification: report.classification,
        pass,
    };
    emit(&[row], &a.output, out)?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_sample(a: SampleArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    check_n(a.n)?;
    let cfg = SamplerConfig::new(a.seed, a.count)?;
    let kernel = family_kernel(a.family, a.kernel, a.alpha)?;
    let (mx, my) = a.marginals.marginals();
    let pairs = sample_family(a.family, a.n, &kernel, &mx, &my, &cfg)?;
    let summary: &mut dyn Write = match &a.output {
        Some(path) => {
            write_samples_csv(BufWriter::new(File::create(path)?), a.seed, &pairs)?;
            out
        }
        None => {
            write_samples_csv(&mut *out, a.seed, &pairs)?;
            err
        }
    };
    if pairs.len() < MIN_MC_SAMPLE {
        writeln!(summary, "# rho_hat unavailable: fewer than {MIN_MC_SAMPLE} draws")?;
    } else {
        let est = mc_correlation(&pairs)?;
        writeln!(
            summary,
            "# rho_hat={} std_error={} sample_size={}",
            est.rho_hat, est.std_error, est.sample_size
        )?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SeriesRow {
    n: usize,
    rho: f64,
}

fn cmd_converge(a: ConvergeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if a.step == 0 {
        return Err(config_failure("step must be at least 1"));
    }
    check_n(a.n_min)?;
    let ns: Vec<usize> = (a.n_min..=a.n_max).step_by(a.step).collect();
    if ns.is_empty() {
        return Err(config_failure(format!("empty range n = {}..={}", a.n_min, a.n_max)));
    }
    let settings = a.quad.settings()?;
    let series = convergence_series(a.family, a.alpha, a.marginals, &ns, &settings)?;
    let rows: Vec<SeriesRow> = series.points.iter().map(|&(n, rho)| SeriesRow { n, rho }).collect();
    emit(&rows, &a.output, out)?;
    writeln!(
        err,
        "# nondecreasing={} nonincreasing={}",
        series.nondecreasing, series.nonincreasing
    )?;
    Ok(EXIT_OK)
}

/// Table cells as the CLI prints them; exposed for callers that post-process.
pub fn table_csv(cells: &[TableCell]) -> crate::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in cells {
        w.serialize(c)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
