//! TOML experiment configuration for the `rate` subcommand.
//!
//! ```toml
//! grid_size = 4096
//! functions = ["weierstrass(0.5,8)"]
//! families = ["cesaro", "norlund(k+1)"]
//! p = [2.0]
//! n_range = { lo = 16, hi = 512, per_octave = 2 }   # or: n = [16, 32, 64]
//! n_min_cut = 16
//!
//! [clauses]            # optional
//! n_lo = 1
//! alpha = 0.5          # defaults to the function's claimed exponent
//!
//! [[band]]             # optional, repeatable
//! family = "cesaro"    # omitted selectors match every cell
//! slope_min = -0.65
//! slope_max = -0.35
//! ```

use std::path::PathBuf;

use serde::Deserialize;

use crate::rates::{geometric_ns, required_grid, DEFAULT_EXPONENT_GRID, DEFAULT_N_MIN_CUT};
use crate::summability::FamilyKind;
use crate::zoo::ZooSpec;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
    #[serde(default = "default_per_octave")]
    pub per_octave: u32,
}

fn default_per_octave() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClauseSection {
    #[serde(default = "default_n_lo")]
    pub n_lo: usize,
    pub n_hi: Option<usize>,
    pub alpha: Option<f64>,
    #[serde(default = "default_exponents")]
    pub beta_grid: Vec<f64>,
    #[serde(default = "default_exponents")]
    pub eta_grid: Vec<f64>,
}

fn default_n_lo() -> usize {
    1
}

fn default_exponents() -> Vec<f64> {
    DEFAULT_EXPONENT_GRID.to_vec()
}

/// Acceptance band on the cells matching its selectors.
#[derive(Debug, Clone, PartialEq, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub family: Option<String>,
    pub function: Option<String>,
    pub p: Option<f64>,
    pub slope_min: Option<f64>,
    pub slope_max: Option<f64>,
    /// Bound on every `E_n` of the cell.
    pub max_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateConfig {
    pub grid_size: usize,
    pub functions: Vec<String>,
    pub families: Vec<String>,
    pub p: Vec<f64>,
    pub n: Option<Vec<usize>>,
    pub n_range: Option<NRange>,
    #[serde(default = "default_cut")]
    pub n_min_cut: usize,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub clauses: Option<ClauseSection>,
    #[serde(default, rename = "band")]
    pub bands: Vec<Band>,
}

fn default_cut() -> usize {
    DEFAULT_N_MIN_CUT
}

/// A configuration that passed validation, with every spec resolved.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub raw: RateConfig,
    pub functions: Vec<ZooSpec>,
    pub families: Vec<FamilyKind>,
    pub ns: Vec<usize>,
}

impl RateConfig {
    pub fn parse(text: &str) -> Result<Self, Vec<String>> {
        toml::from_str(text).map_err(|e| vec![format!("config: {}", e.message().trim())])
    }

    /// Resolves specs and checks every constraint, listing all violations.
    pub fn resolve(self) -> Result<ResolvedConfig, Vec<String>> {
        let mut problems = Vec::new();
        let functions: Vec<ZooSpec> = self
            .functions
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s.parse::<ZooSpec>() {
                Ok(spec) => Some(spec),
                Err(e) => {
                    problems.push(format!("functions[{i}]: {e}"));
                    None
                }
            })
            .collect();
        let families: Vec<FamilyKind> = self
            .families
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match FamilyKind::parse(s) {
                Ok(kind) => Some(kind),
                Err(e) => {
                    problems.push(format!("families[{i}]: {e}"));
                    None
                }
            })
            .collect();
        if self.functions.is_empty() {
            problems.push("functions: empty list".into());
        }
        if self.families.is_empty() {
            problems.push("families: empty list".into());
        }
        if self.p.is_empty() {
            problems.push("p: empty list".into());
        }
        for (i, p) in self.p.iter().enumerate() {
            if !(*p >= 1.0) || p.is_infinite() {
                problems.push(format!("p[{i}]: {p} is not a finite exponent >= 1"));
            }
        }
        let ns = match (&self.n, &self.n_range) {
            (Some(_), Some(_)) => {
                problems.push("n, n_range: give exactly one".into());
                Vec::new()
            }
            (None, None) => {
                problems.push("n, n_range: one of them is required".into());
                Vec::new()
            }
            (Some(list), None) => list.clone(),
            (None, Some(r)) => {
                if r.lo == 0 || r.lo > r.hi {
                    problems.push(format!(
                        "n_range: need 1 <= lo <= hi, got {}..={}",
                        r.lo, r.hi
                    ));
                    Vec::new()
                } else {
                    geometric_ns(r.lo, r.hi, r.per_octave)
                }
            }
        };
        if ns.windows(2).any(|w| w[0] >= w[1]) {
            problems.push("n: must be strictly increasing".into());
        }
        if let Some(&max_n) = ns.last() {
            if self.grid_size < required_grid(max_n) {
                problems.push(format!(
                    "grid_size: grid too small: N = {} but 4(max n + 1) = {}",
                    self.grid_size,
                    required_grid(max_n)
                ));
            }
        }
        if let Some(c) = &self.clauses {
            if let Some(a) = c.alpha {
                if !(a > 0.0 && a <= 1.0) {
                    problems.push(format!("clauses.alpha: {a} outside (0, 1]"));
                }
            }
            if c.n_hi.is_some_and(|hi| hi < c.n_lo) {
                problems.push("clauses: n_hi below n_lo".into());
            }
        }
        for (i, band) in self.bands.iter().enumerate() {
            if let Some(f) = &band.family {
                if FamilyKind::parse(f).is_err() {
                    problems.push(format!("band[{i}].family: cannot parse '{f}'"));
                }
            }
            if let Some(f) = &band.function {
                if f.parse::<ZooSpec>().is_err() {
                    problems.push(format!("band[{i}].function: cannot parse '{f}'"));
                }
            }
            if band.slope_min.is_none() && band.slope_max.is_none() && band.max_error.is_none() {
                problems.push(format!("band[{i}]: no bound given"));
            }
        }
        if problems.is_empty() {
            Ok(ResolvedConfig {
                raw: self,
                functions,
                families,
                ns,
            })
        } else {
            Err(problems)
        }
    }
}
