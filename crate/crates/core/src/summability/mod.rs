//! Lower-triangular summability matrices and the means `T_n = Σ_k a_{n,k} S_k`.
//!
//! A family generates one row `(a_{n,0}, …, a_{n,n})` per `n`; entries with
//! `k > n` are zero. The fast evaluation path regroups the partial sums into
//! harmonics, `T_n = Σ_m w_m U_m` with tail weights `w_m = Σ_{k≥m} a_{n,k}`,
//! and synthesizes once. [`matrix_mean_naive`] keeps the literal definition
//! as an oracle.

mod diagnostics;
mod kernel;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub(crate) use diagnostics::running_means;
pub use diagnostics::{row_diagnostics, RowDiagnostics};
pub use kernel::{kernel_eval, kernel_l1_split, kernel_smooth, KernelSplit, KERNEL_TOLERANCE};

use crate::error::{Error, Result};
use crate::fourier::{synthesize, FourierCoefficients};
use crate::periodic::{Grid, SampledPeriodicFunction};
use crate::zoo::{parse_f64, split_call};

/// One row `a_{n,0..=n}` of a lower-triangular nonnegative matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityRow {
    n: usize,
    weights: Vec<f64>,
    row_sum_deviation: f64,
}

impl SummabilityRow {
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                actual: weights.len(),
            });
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite(index));
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        let sum = suffix_sums(&weights)[0];
        Ok(Self {
            n,
            weights,
            row_sum_deviation: (sum - 1.0).abs(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `a_{n,k}`, zero for `k > n`.
    pub fn get(&self, k: usize) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    /// `|Σ_k a_{n,k} − 1|`.
    pub fn row_sum_deviation(&self) -> f64 {
        self.row_sum_deviation
    }

    pub fn row_sum(&self) -> f64 {
        suffix_sums(&self.weights)[0]
    }
}

fn suffix_sums(weights: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; weights.len()];
    let mut acc = 0.0;
    for (k, w) in weights.iter().enumerate().rev() {
        acc += w;
        out[k] = acc;
    }
    out
}

/// `w_m = Σ_{k=m}^{n} a_{n,k}` for `m = 0..=n`.
pub fn tail_weights(row: &SummabilityRow) -> Vec<f64> {
    suffix_sums(&row.weights)
}

/// Positive weight sequences `p_k` defining Nörlund means `R_n = Σ p_k S_k / P_n`.
#[derive(Debug, Clone, PartialEq)]
pub enum NorlundWeights {
    /// `p_k = 1` (the Cesàro row).
    Constant,
    /// `p_k = k + 1`.
    Linear,
    /// `p_k = (k + 1)^β`.
    Power(f64),
    /// `p_k = q^k`.
    Geometric(f64),
    /// Explicit `p_0, p_1, …`.
    List(Vec<f64>),
}

impl NorlundWeights {
    fn validate(&self) -> Result<()> {
        match self {
            NorlundWeights::Power(beta) if !beta.is_finite() => {
                Err(Error::OutOfRange(format!("power exponent {beta}")))
            }
            NorlundWeights::Geometric(q) if !(q.is_finite() && *q > 0.0) => {
                Err(Error::NonPositiveWeight {
                    index: 1,
                    value: *q,
                })
            }
            NorlundWeights::List(list) => {
                if list.is_empty() {
                    return Err(Error::Parse("empty Nörlund weight list".into()));
                }
                match list.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
                    Some(index) => Err(Error::NonPositiveWeight {
                        index,
                        value: list[index],
                    }),
                    None => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    /// `p_0..=p_n`, possibly rescaled by a common positive factor.
    fn scaled_weights(&self, n: usize) -> Result<Vec<f64>> {
        Ok(match self {
            NorlundWeights::Constant => vec![1.0; n + 1],
            NorlundWeights::Linear => (0..=n).map(|k| (k + 1) as f64).collect(),
            NorlundWeights::Power(beta) => (0..=n).map(|k| ((k + 1) as f64).powf(*beta)).collect(),
            NorlundWeights::Geometric(q) => {
                // q^{k−n} for q ≥ 1 keeps every term in [q^{-n}, 1]
                let anchor = if *q >= 1.0 { n as f64 } else { 0.0 };
                (0..=n).map(|k| q.powf(k as f64 - anchor)).collect()
            }
            NorlundWeights::List(list) => {
                if n >= list.len() {
                    return Err(Error::RowUnavailable(n));
                }
                list[..=n].to_vec()
            }
        })
    }

    /// `p_n` (unscaled). Only meaningful while it fits in an `f64`.
    pub fn weight(&self, k: usize) -> f64 {
        match self {
            NorlundWeights::Constant => 1.0,
            NorlundWeights::Linear => (k + 1) as f64,
            NorlundWeights::Power(beta) => ((k + 1) as f64).powf(*beta),
            NorlundWeights::Geometric(q) => q.powf(k as f64),
            NorlundWeights::List(list) => list.get(k).copied().unwrap_or(f64::NAN),
        }
    }
}

/// Rows supplied explicitly (e.g. from a text file).
#[derive(Debug, Clone, PartialEq)]
pub struct CustomRows {
    pub label: String,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    Cesaro,
    Norlund(NorlundWeights),
    Identity,
    Custom(CustomRows),
    /// Rows of `base` scaled by `1 + (n+1)^{−α}`, so `|Σ_k a_{n,k} − 1| = (n+1)^{−α}`
    /// for stochastic bases.
    Perturbed {
        base: Box<FamilyKind>,
        alpha: f64,
    },
}

impl FamilyKind {
    /// Parses a family spec. `custom(path)` reads the matrix file.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, args) = split_call(s)?;
        match (name, args) {
            ("cesaro", None) => Ok(FamilyKind::Cesaro),
            ("identity", None) => Ok(FamilyKind::Identity),
            ("norlund", Some(arg)) => Ok(FamilyKind::Norlund(parse_norlund(arg)?)),
            ("perturbed", Some(arg)) => {
                let cut = top_level_last_comma(arg).ok_or_else(|| {
                    Error::Parse(format!("perturbed expects (family, alpha), got '{s}'"))
                })?;
                let base = FamilyKind::parse(&arg[..cut])?;
                let alpha = parse_f64(&arg[cut + 1..])?;
                Ok(FamilyKind::Perturbed {
                    base: Box::new(base),
                    alpha,
                })
            }
            ("custom", Some(path)) => {
                let rows = load_matrix_file(Path::new(path.trim()))?;
                Ok(FamilyKind::Custom(CustomRows {
                    label: format!("custom({})", path.trim()),
                    rows,
                }))
            }
            _ => Err(Error::Parse(format!("unknown matrix family '{s}'"))),
        }
    }
}

fn top_level_last_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut last = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => last = Some(i),
            _ => {}
        }
    }
    last
}

fn parse_norlund(arg: &str) -> Result<NorlundWeights> {
    let arg = arg.trim();
    let compact: String = arg.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "const" || compact == "1" {
        return Ok(NorlundWeights::Constant);
    }
    if compact == "k+1" {
        return Ok(NorlundWeights::Linear);
    }
    if let Some(beta) = compact.strip_prefix("(k+1)^") {
        return Ok(NorlundWeights::Power(parse_f64(beta)?));
    }
    if let Some(q) = compact.strip_suffix("^k") {
        return Ok(NorlundWeights::Geometric(parse_f64(q)?));
    }
    if let Some(list) = arg.strip_prefix("list:") {
        let values = list
            .split([',', ' '])
            .filter(|t| !t.trim().is_empty())
            .map(parse_f64)
            .collect::<Result<Vec<_>>>()?;
        return Ok(NorlundWeights::List(values));
    }
    Err(Error::Parse(format!("unknown Nörlund weights '{arg}'")))
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::parse(s)
    }
}

impl fmt::Display for NorlundWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NorlundWeights::Constant => write!(f, "const"),
            NorlundWeights::Linear => write!(f, "k+1"),
            NorlundWeights::Power(beta) => write!(f, "(k+1)^{beta}"),
            NorlundWeights::Geometric(q) => write!(f, "{q}^k"),
            NorlundWeights::List(list) => {
                let items: Vec<String> = list.iter().map(|v| v.to_string()).collect();
                write!(f, "list:{}", items.join(","))
            }
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Cesaro => write!(f, "cesaro"),
            FamilyKind::Identity => write!(f, "identity"),
            FamilyKind::Norlund(w) => write!(f, "norlund({w})"),
            FamilyKind::Custom(c) => write!(f, "{}", c.label),
            FamilyKind::Perturbed { base, alpha } => write!(f, "perturbed({base},{alpha})"),
        }
    }
}

/// Reads a matrix: one row per line, row `n` holding `n + 1` whitespace-separated
/// reals. Blank lines and lines starting with `#` are skipped.
pub fn load_matrix_file(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix_text(&text)
}

pub fn parse_matrix_text(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: invalid number '{t}'", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != rows.len() + 1 {
            return Err(Error::Parse(format!(
                "line {}: row {} must hold {} entries, found {}",
                lineno + 1,
                rows.len(),
                rows.len() + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Generator of validated rows for every `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityMatrixFamily {
    kind: FamilyKind,
}

impl SummabilityMatrixFamily {
    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    /// Largest `n` with a row, `None` when unbounded.
    pub fn max_n(&self) -> Option<usize> {
        fn of(kind: &FamilyKind) -> Option<usize> {
            match kind {
                FamilyKind::Norlund(NorlundWeights::List(l)) => Some(l.len() - 1),
                FamilyKind::Custom(c) => c.rows.len().checked_sub(1),
                FamilyKind::Perturbed { base, .. } => of(base),
                _ => None,
            }
        }
        of(&self.kind)
    }

    /// Row `n` of the family.
    pub fn row(&self, n: usize) -> Result<SummabilityRow> {
        SummabilityRow::new(n, raw_row(&self.kind, n)?)
    }

    pub fn rows(&self, ns: impl IntoIterator<Item = usize>) -> Result<Vec<SummabilityRow>> {
        ns.into_iter().map(|n| self.row(n)).collect()
    }
}

fn raw_row(kind: &FamilyKind, n: usize) -> Result<Vec<f64>> {
    Ok(match kind {
        FamilyKind::Cesaro => vec![1.0 / (n + 1) as f64; n + 1],
        FamilyKind::Identity => {
            let mut row = vec![0.0; n + 1];
            row[n] = 1.0;
            row
        }
        FamilyKind::Norlund(w) => {
            let p = w.scaled_weights(n)?;
            let total: f64 = p.iter().sum();
            p.iter().map(|v| v / total).collect()
        }
        FamilyKind::Custom(c) => c.rows.get(n).cloned().ok_or(Error::RowUnavailable(n))?,
        FamilyKind::Perturbed { base, alpha } => {
            let scale = 1.0 + ((n + 1) as f64).powf(-alpha);
            raw_row(base, n)?.into_iter().map(|v| v * scale).collect()
        }
    })
}

/// Builds a family after validating its parameters.
pub fn make_family(kind: FamilyKind) -> Result<SummabilityMatrixFamily> {
    fn validate(kind: &FamilyKind) -> Result<()> {
        match kind {
            FamilyKind::Norlund(w) => w.validate(),
            FamilyKind::Custom(c) => {
                for (n, row) in c.rows.iter().enumerate() {
                    SummabilityRow::new(n, row.clone())?;
                }
                Ok(())
            }
            FamilyKind::Perturbed { base, alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::OutOfRange(format!("perturbation exponent {alpha}")));
                }
                validate(base)
            }
            _ => Ok(()),
        }
    }
    validate(&kind)?;
    Ok(SummabilityMatrixFamily { kind })
}

/// `T_n(f) = Σ_k a_{n,k} S_k(f)` through one synthesis with tail weights.
pub fn matrix_mean(
    c: &FourierCoefficients,
    row: &SummabilityRow,
    grid: Grid,
) -> Result<SampledPeriodicFunction> {
    synthesize(c, &tail_weights(row), grid, format!("T_{}", row.n()))
}

/// Literal `Σ_k a_{n,k} S_k` with every `S_k` materialized by direct
/// trigonometric summation. `O(n·N)`; kept as an oracle for [`matrix_mean`].
pub fn matrix_mean_naive(
    c: &FourierCoefficients,
    row: &SummabilityRow,
    grid: Grid,
) -> Result<SampledPeriodicFunction> {
    let n = row.n();
    if n > c.max_degree() {
        return Err(Error::DegreeOverflow {
            degree: n,
            max: c.max_degree(),
        });
    }
    if n > grid.max_harmonic() {
        return Err(Error::Aliasing(format!(
            "degree {n} cannot be evaluated on N = {}",
            grid.size()
        )));
    }
    let size = grid.size();
    let table = grid.trig_table();
    let mut partial = vec![c.a0 / 2.0; size];
    let mut out: Vec<f64> = partial.iter().map(|s| row.get(0) * s).collect();
    for k in 1..=n {
        let (a, b) = c.pair(k);
        for (j, s) in partial.iter_mut().enumerate() {
            let (cos, sin) = table.at(k, j);
            *s += a * cos + b * sin;
        }
        let w = row.get(k);
        for (o, s) in out.iter_mut().zip(&partial) {
            *o += w * s;
        }
    }
    SampledPeriodicFunction::new(grid, out, format!("T_{n} (naive)"))
}
