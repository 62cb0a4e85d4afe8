//! The `rate` experiment: error curves per (family, function, p) cell,
//! rate fits, hypothesis verdicts and acceptance bands.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{Band, RateConfig, ResolvedConfig};
use super::{to_json, write_file, Cli, CliError};
use crate::periodic::Grid;
use crate::rates::{
    clause_check, error_csv, error_curve, loglog_fit, ClauseCheckConfig, ClauseReport, ErrorCurve,
    RateFit,
};
use crate::summability::{make_family, FamilyKind};
use crate::zoo::{zoo_function, ZooSpec};

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub matrix: String,
    pub function: String,
    pub p: f64,
    pub curve: Option<ErrorCurve>,
    pub fit: Option<RateFit>,
    pub clauses: Option<ClauseReport>,
    /// Set when the cell could not be computed or fitted.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BandResult {
    pub band: Band,
    pub cells: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateOutcome {
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub grid_size: usize,
    pub ns: Vec<usize>,
    pub cells: Vec<Cell>,
    pub bands: Vec<BandResult>,
    pub passed: bool,
    #[serde(skip)]
    pub wall_seconds: Vec<f64>,
}

fn run_cell(config: &ResolvedConfig, family: &FamilyKind, function: &ZooSpec, p: f64) -> Cell {
    let mut cell = Cell {
        matrix: family.to_string(),
        function: function.to_string(),
        p,
        curve: None,
        fit: None,
        clauses: None,
        error: None,
    };
    let result = (|| -> crate::Result<()> {
        let fam = make_family(family.clone())?;
        let f = zoo_function(function, Grid::new(config.raw.grid_size)?)?;
        let curve = error_curve(&fam, &f, p, &config.ns)?;
        match loglog_fit(&curve, config.raw.n_min_cut) {
            Ok(fit) => cell.fit = Some(fit),
            Err(e) => cell.error = Some(format!("fit: {e}")),
        }
        cell.curve = Some(curve);
        let section = config.raw.clauses.clone();
        let alpha = section
            .as_ref()
            .and_then(|c| c.alpha)
            .unwrap_or(function.claimed_class().alpha);
        let mut check = ClauseCheckConfig::new(1, *config.ns.last().expect("validated nonempty"));
        if let Some(c) = section {
            check.n_lo = c.n_lo;
            check.n_hi = c.n_hi.unwrap_or(check.n_hi);
            check.beta_grid = c.beta_grid;
            check.eta_grid = c.eta_grid;
        }
        cell.clauses = Some(clause_check(&fam, p, alpha, &check)?);
        Ok(())
    })();
    if let Err(e) = result {
        cell.error = Some(e.to_string());
    }
    cell
}

fn canonical_family(s: &str) -> Option<String> {
    FamilyKind::parse(s).ok().map(|k| k.to_string())
}

fn canonical_function(s: &str) -> Option<String> {
    s.parse::<ZooSpec>().ok().map(|f| f.to_string())
}

fn evaluate_band(band: &Band, cells: &[Cell]) -> BandResult {
    let family = band.family.as_deref().and_then(canonical_family);
    let function = band.function.as_deref().and_then(canonical_function);
    let mut failures = Vec::new();
    let mut matched = 0;
    for cell in cells {
        if family.as_ref().is_some_and(|f| *f != cell.matrix)
            || function.as_ref().is_some_and(|f| *f != cell.function)
            || band.p.is_some_and(|p| p != cell.p)
        {
            continue;
        }
        matched += 1;
        let id = format!("{} / {} / p = {}", cell.matrix, cell.function, cell.p);
        if band.slope_min.is_some() || band.slope_max.is_some() {
            match &cell.fit {
                Some(fit) => {
                    let lo = band.slope_min.unwrap_or(f64::NEG_INFINITY);
                    let hi = band.slope_max.unwrap_or(f64::INFINITY);
                    if !(lo..=hi).contains(&fit.slope) {
                        failures.push(format!("{id}: slope {} outside [{lo}, {hi}]", fit.slope));
                    }
                }
                None => failures.push(format!("{id}: no rate fit")),
            }
        }
        if let Some(max) = band.max_error {
            match &cell.curve {
                Some(curve) => {
                    for (n, e) in curve.ns.iter().zip(&curve.errors) {
                        if !(*e <= max) {
                            failures.push(format!("{id}: E_{n} = {e} exceeds {max}"));
                        }
                    }
                }
                None => failures.push(format!("{id}: no error curve")),
            }
        }
    }
    if matched == 0 {
        failures.push("band matches no cell".into());
    }
    BandResult {
        band: band.clone(),
        cells: matched,
        pass: failures.is_empty(),
        failures,
    }
}

/// Runs every cell (in parallel, collected in configuration order) and
/// evaluates the bands.
pub fn run_rate(config: &ResolvedConfig, config_text: &str, seed: u64) -> RateOutcome {
    let mut jobs = Vec::new();
    for family in &config.families {
        for function in &config.functions {
            for &p in &config.raw.p {
                jobs.push((family, function, p));
            }
        }
    }
    let timed: Vec<(Cell, f64)> = jobs
        .par_iter()
        .map(|(family, function, p)| {
            let start = Instant::now();
            let cell = run_cell(config, family, function, *p);
            (cell, start.elapsed().as_secs_f64())
        })
        .collect();
    let (cells, wall_seconds): (Vec<Cell>, Vec<f64>) = timed.into_iter().unzip();
    let bands: Vec<BandResult> = config
        .raw
        .bands
        .iter()
        .map(|b| evaluate_band(b, &cells))
        .collect();
    let passed = bands.iter().all(|b| b.pass) && cells.iter().all(|c| c.curve.is_some());
    RateOutcome {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: format!("{:x}", Sha256::digest(config_text.as_bytes())),
        seed,
        grid_size: config.raw.grid_size,
        ns: config.ns.clone(),
        cells,
        bands,
        passed,
        wall_seconds,
    }
}

#[derive(Serialize)]
struct FitRecord<'a> {
    matrix: &'a str,
    function: &'a str,
    p: f64,
    slope: Option<f64>,
    intercept: Option<f64>,
    r2: Option<f64>,
    used: Option<&'a [usize]>,
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct ClauseRecord<'a> {
    function: &'a str,
    #[serde(flatten)]
    report: &'a ClauseReport,
}

#[derive(Serialize)]
struct Timing<'a> {
    matrix: &'a str,
    function: &'a str,
    p: f64,
    seconds: f64,
}

pub(super) fn cmd_rate(cli: &Cli, path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let resolved = RateConfig::parse(&text)
        .and_then(RateConfig::resolve)
        .map_err(|problems| CliError::Input(problems.join("\n")))?;
    let seed = resolved.raw.seed.unwrap_or(cli.seed);
    let out_dir = cli
        .out
        .clone()
        .or_else(|| resolved.raw.output_dir.clone())
        .unwrap_or_else(|| "results".into());
    if !cli.quiet {
        eprintln!(
            "rate: {} families x {} functions x {} exponents, {} rows each",
            resolved.families.len(),
            resolved.functions.len(),
            resolved.raw.p.len(),
            resolved.ns.len()
        );
    }
    let outcome = run_rate(&resolved, &text, seed);

    let curves: Vec<ErrorCurve> = outcome
        .cells
        .iter()
        .filter_map(|c| c.curve.clone())
        .collect();
    write_file(&out_dir, "errors.csv", &error_csv(&curves))?;
    let fits: Vec<FitRecord> = outcome
        .cells
        .iter()
        .map(|c| FitRecord {
            matrix: &c.matrix,
            function: &c.function,
            p: c.p,
            slope: c.fit.as_ref().map(|f| f.slope),
            intercept: c.fit.as_ref().map(|f| f.intercept),
            r2: c.fit.as_ref().map(|f| f.r2),
            used: c.fit.as_ref().map(|f| f.used.as_slice()),
            error: c.error.as_deref(),
        })
        .collect();
    write_file(&out_dir, "fits.json", &to_json(&fits))?;
    let clauses: Vec<ClauseRecord> = outcome
        .cells
        .iter()
        .filter_map(|c| {
            c.clauses.as_ref().map(|report| ClauseRecord {
                function: &c.function,
                report,
            })
        })
        .collect();
    write_file(&out_dir, "clauses.json", &to_json(&clauses))?;
    write_file(&out_dir, "report.json", &to_json(&outcome))?;
    let timings: Vec<Timing> = outcome
        .cells
        .iter()
        .zip(&outcome.wall_seconds)
        .map(|(c, s)| Timing {
            matrix: &c.matrix,
            function: &c.function,
            p: c.p,
            seconds: *s,
        })
        .collect();
    write_file(&out_dir, "timings.json", &to_json(&timings))?;

    let summary = format!(
        "wrote {} cells to {}; bands {}\n",
        outcome.cells.len(),
        out_dir.display(),
        if outcome.passed { "passed" } else { "FAILED" }
    );
    if outcome.passed {
        Ok(summary)
    } else {
        let detail: Vec<String> = outcome
            .bands
            .iter()
            .flat_map(|b| b.failures.iter().cloned())
            .chain(outcome.cells.iter().filter(|c| c.curve.is_none()).map(|c| {
                format!(
                    "{} / {}: {}",
                    c.matrix,
                    c.function,
                    c.error.clone().unwrap_or_default()
                )
            }))
            .collect();
        Err(CliError::Check(format!("{summary}{}", detail.join("\n"))))
    }
}
