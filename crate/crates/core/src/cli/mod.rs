//! The `trig-approx` command line.
//!
//! Exit codes: 0 on success, 1 when an acceptance band or embedding check
//! fails, 2 for invalid input or configuration.

mod config;
mod rate;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{classify, embedding_harness, FiniteSequence, Semantics};
use crate::modulus::{default_delta_grid, lip_exponent_fit, modulus_curve, DEFAULT_SHIFT_COUNT};
use crate::periodic::Grid;
use crate::rates::{clause_check, geometric_ns, ClauseCheckConfig, DEFAULT_EXPONENT_GRID};
use crate::summability::{kernel_l1_split, make_family, FamilyKind};
use crate::zoo::{parse_f64, zoo_function, ZooSpec};

pub use config::{Band, ClauseSection, NRange, RateConfig, ResolvedConfig};
pub use rate::{run_rate, RateOutcome};

#[derive(Debug, Parser)]
#[command(
    name = "trig-approx",
    version,
    about = "Summability means of Fourier series: rates, classes, moduli"
)]
pub struct Cli {
    /// Experiment configuration (TOML), used by `rate`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory receiving output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Suppress progress messages.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report membership in all twelve sequence classes.
    Classify(ClassifyArgs),
    /// Run the error-curve experiment described by --config.
    Rate,
    /// Integral modulus of continuity and Lipschitz exponent fit.
    Modulus(ModulusArgs),
    /// Check the hypotheses on a matrix family over a range of rows.
    CheckMatrix(CheckMatrixArgs),
    /// Kernel L1 masses near and away from the origin.
    Kernel(KernelArgs),
    /// Seeded check of the class embeddings.
    Embed(EmbedArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Sequence entries.
    #[arg(allow_negative_numbers = true)]
    pub values: Vec<String>,
    /// Read entries (whitespace separated, one per line is typical) from a file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Treat the sequence as a matrix row followed by an implicit zero.
    #[arg(long)]
    pub row: bool,
}

#[derive(Debug, Args)]
pub struct ModulusArgs {
    /// Function spec, e.g. `weierstrass(0.5,8)`.
    pub function: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Comma-separated deltas; accepts `pi`, `pi/8`, `3*pi/4`.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<String>>,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_SHIFT_COUNT)]
    pub shift_count: usize,
}

#[derive(Debug, Args)]
pub struct CheckMatrixArgs {
    /// Family spec, e.g. `norlund(k+1)`.
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub n_lo: usize,
    #[arg(long, default_value_t = 256)]
    pub n_hi: usize,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, value_delimiter = ',')]
    pub beta_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub eta_grid: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    pub family: String,
    /// Explicit row indices; defaults to powers of two from 8 to 512.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    #[arg(long, default_value_t = 64)]
    pub quad_points: usize,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 64)]
    pub max_len: usize,
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Check(_) => 1,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("io: {e}"))
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

/// `x`, `pi`, `pi/d`, `c*pi` or `c*pi/d`.
pub fn parse_angle(s: &str) -> crate::Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    let (head, divisor) = match t.split_once('/') {
        Some((h, d)) => (h.trim().to_string(), parse_f64(d)?),
        None => (t.clone(), 1.0),
    };
    let numerator = if head == "pi" {
        PI
    } else if let Some(c) = head.strip_suffix("*pi") {
        parse_f64(c)? * PI
    } else {
        parse_f64(&head)?
    };
    Ok(numerator / divisor)
}

fn parse_values(tokens: impl IntoIterator<Item = String>) -> Result<Vec<f64>, CliError> {
    tokens
        .into_iter()
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("cannot parse '{t}' as a number")))
        })
        .collect()
}

fn cmd_classify(args: &ClassifyArgs) -> Result<String, CliError> {
    let mut tokens = args.values.clone();
    if let Some(path) = &args.input {
        let text = fs::read_to_string(path)?;
        tokens.extend(text.split_whitespace().map(str::to_string));
    }
    let values = parse_values(tokens)?;
    let semantics = if args.row {
        Semantics::Row
    } else {
        Semantics::Free
    };
    let seq = FiniteSequence::new(values, semantics)?;
    Ok(classify(&seq).to_json() + "\n")
}

#[derive(Serialize)]
struct ModulusOutput<'a> {
    function: String,
    p: f64,
    grid_size: usize,
    alpha_hat: Option<f64>,
    r2: f64,
    delta_range: (f64, f64),
    diagnostic: &'a Option<String>,
}

fn cmd_modulus(cli: &Cli, args: &ModulusArgs) -> Result<String, CliError> {
    let spec: ZooSpec = args.function.parse()?;
    let f = zoo_function(&spec, Grid::new(args.grid)?)?;
    let deltas = match &args.deltas {
        Some(list) => list
            .iter()
            .map(|s| parse_angle(s))
            .collect::<crate::Result<Vec<_>>>()?,
        None => default_delta_grid(),
    };
    let curve = modulus_curve(&f, args.p, &deltas, args.shift_count)?;
    let fit = if deltas.len() >= 5 {
        Some(lip_exponent_fit(&f, args.p, &deltas)?)
    } else {
        None
    };
    let diagnostic = match &fit {
        Some(fit) => fit.diagnostic.clone(),
        None => Some("fewer than 5 deltas; no exponent fit".to_string()),
    };
    let summary = ModulusOutput {
        function: spec.to_string(),
        p: args.p,
        grid_size: args.grid,
        alpha_hat: fit.as_ref().map(|f| f.alpha_hat).filter(|a| a.is_finite()),
        r2: fit.as_ref().map_or(0.0, |f| f.r2),
        delta_range: (deltas[0], deltas[deltas.len() - 1]),
        diagnostic: &diagnostic,
    };
    let json = to_json(&summary);
    if let Some(dir) = &cli.out {
        write_file(dir, "modulus.csv", &curve.to_csv())?;
        write_file(dir, "lipfit.json", &json)?;
    }
    Ok(curve.to_csv() + &json)
}

fn cmd_check_matrix(cli: &Cli, args: &CheckMatrixArgs) -> Result<String, CliError> {
    let family = make_family(FamilyKind::parse(&args.family)?)?;
    let config = ClauseCheckConfig {
        n_lo: args.n_lo,
        n_hi: args.n_hi,
        beta_grid: args
            .beta_grid
            .clone()
            .unwrap_or_else(|| DEFAULT_EXPONENT_GRID.to_vec()),
        eta_grid: args
            .eta_grid
            .clone()
            .unwrap_or_else(|| DEFAULT_EXPONENT_GRID.to_vec()),
    };
    let report = clause_check(&family, args.p, args.alpha, &config)?;
    let json = to_json(&report);
    if let Some(dir) = &cli.out {
        write_file(dir, "clauses.json", &json)?;
    }
    Ok(json)
}

fn cmd_kernel(cli: &Cli, args: &KernelArgs) -> Result<String, CliError> {
    let family = make_family(FamilyKind::parse(&args.family)?)?;
    let ns = args.ns.clone().unwrap_or_else(|| geometric_ns(8, 512, 1));
    let splits = ns
        .par_iter()
        .map(|&n| kernel_l1_split(&family.row(n)?, args.quad_points))
        .collect::<crate::Result<Vec<_>>>()?;
    if let Some(dir) = &cli.out {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "near", "far", "total"])
            .expect("in-memory write");
        for s in &splits {
            w.write_record([
                s.n.to_string(),
                crate::sig17(s.near),
                crate::sig17(s.far),
                crate::sig17(s.total()),
            ])
            .expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        write_file(dir, "kernel.csv", &String::from_utf8(bytes).expect("UTF-8"))?;
    }
    Ok(to_json(&splits))
}

fn cmd_embed(cli: &Cli, args: &EmbedArgs) -> Result<String, CliError> {
    let violations = embedding_harness(args.samples, args.max_len, cli.seed);
    let json = to_json(&violations);
    if let Some(dir) = &cli.out {
        write_file(dir, "violations.json", &json)?;
    }
    if violations.is_empty() {
        Ok(json)
    } else {
        Err(CliError::Check(format!(
            "{} embedding violations\n{json}",
            violations.len()
        )))
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Rate => {
            let path = cli
                .config
                .as_ref()
                .ok_or_else(|| CliError::Input("rate needs --config PATH".into()))?;
            rate::cmd_rate(cli, path)
        }
        Command::Modulus(args) => cmd_modulus(cli, args),
        Command::CheckMatrix(args) => cmd_check_matrix(cli, args),
        Command::Kernel(args) => cmd_kernel(cli, args),
        Command::Embed(args) => cmd_embed(cli, args),
    }
}

/// Parses arguments, runs the subcommand and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.jobs > 0 {
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.code();
            match e {
                CliError::Input(msg) | CliError::Check(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}
