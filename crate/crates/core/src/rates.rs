//! Error curves `E_n = ‖T_n f − f‖_p`, log-log rate fits, the weighted row
//! sum ratio, and the hypothesis checker for matrix families.
//!
//! An `O(·)` hypothesis on a finite range `n_lo..=n_hi` is read as: the
//! running supremum of the scaled quantity does not grow by more than a
//! factor [`GROWTH_FACTOR`] between `n_mid = ⌊√(n_lo·n_hi)⌋` and `n_hi`.
//! Bounded sequences pass; sequences growing like `n^γ` fail once
//! `(n_hi/n_mid)^γ > 2`.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::classes::{
    almost_monotone_constant, bounded_variation_constant, mean_transform, monotone_test, Direction,
    FiniteSequence, Side,
};
use crate::error::{Error, Result};
use crate::fourier::analyze;
use crate::periodic::{check_exponent, discrete_lp, SampledPeriodicFunction};
use crate::regression::fit_line;
use crate::summability::{matrix_mean, row_diagnostics, SummabilityMatrixFamily, SummabilityRow};

/// Rate fits ignore `n` below this by default.
pub const DEFAULT_N_MIN_CUT: usize = 16;
/// Allowed growth of a running supremum over the upper half (in log scale) of the range.
pub const GROWTH_FACTOR: f64 = 2.0;
/// Absolute slack in the growth test, so that round-off sized quantities pass.
pub const GROWTH_FLOOR: f64 = 1e-9;
/// Default search grid for the exponents `β` and `η`.
pub const DEFAULT_EXPONENT_GRID: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

/// `round(lo · 2^{i/per_octave})` for `i = 0, 1, …` while within `hi`, deduplicated.
pub fn geometric_ns(lo: usize, hi: usize, per_octave: u32) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut i = 0;
    loop {
        let x = lo as f64 * 2f64.powf(f64::from(i) / f64::from(per_octave.max(1)));
        let n = x.round() as usize;
        if n > hi {
            break;
        }
        if out.last() != Some(&n) {
            out.push(n);
        }
        i += 1;
    }
    out
}

/// `E_n` for one (family, function, p) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCurve {
    pub matrix: String,
    pub function: String,
    pub p: f64,
    pub ns: Vec<usize>,
    pub errors: Vec<f64>,
    pub grid_size: usize,
}

pub const ERROR_CSV_HEADER: [&str; 5] = ["matrix", "function", "p", "n", "error"];

/// CSV document `matrix,function,p,n,error` for several curves, in order.
pub fn error_csv(curves: &[ErrorCurve]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ERROR_CSV_HEADER).expect("in-memory write");
    for c in curves {
        for (n, e) in c.ns.iter().zip(&c.errors) {
            w.write_record([
                c.matrix.clone(),
                c.function.clone(),
                crate::sig17(c.p),
                n.to_string(),
                crate::sig17(*e),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}

/// Smallest grid admitted for degrees up to `max_n`.
pub fn required_grid(max_n: usize) -> usize {
    4 * (max_n + 1)
}

/// `E_n = ‖T_n(f) − f‖_p` for every `n` in `ns` (strictly increasing).
///
/// The grid of `f` must hold at least `4(max n + 1)` points.
pub fn error_curve(
    family: &SummabilityMatrixFamily,
    f: &SampledPeriodicFunction,
    p: f64,
    ns: &[usize],
) -> Result<ErrorCurve> {
    check_exponent(p)?;
    let max_n = match ns.last() {
        Some(&n) => n,
        None => return Err(Error::TooFewPoints { got: 0, need: 1 }),
    };
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange(
            "n list must be strictly increasing".into(),
        ));
    }
    let grid = f.grid();
    if grid.size() < required_grid(max_n) {
        return Err(Error::GridTooSmall {
            grid: grid.size(),
            required: required_grid(max_n),
            degree: max_n,
        });
    }
    let coefficients = analyze(f, max_n)?;
    let mut errors = Vec::with_capacity(ns.len());
    for &n in ns {
        let t = matrix_mean(&coefficients, &family.row(n)?, grid)?;
        let diff: Vec<f64> = t
            .values()
            .iter()
            .zip(f.values())
            .map(|(a, b)| a - b)
            .collect();
        errors.push(discrete_lp(&diff, p));
    }
    Ok(ErrorCurve {
        matrix: family.label(),
        function: f.label().to_string(),
        p,
        ns: ns.to_vec(),
        errors,
        grid_size: grid.size(),
    })
}

/// Least-squares line through `(log n, log E_n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// `n` values entering the fit.
    pub used: Vec<usize>,
    /// `n ≥ cut` values dropped for a nonpositive error.
    pub dropped: Vec<usize>,
}

/// Fits `log E_n ≈ slope·log n + intercept` over `n ≥ n_min_cut`.
///
/// Points with `E_n ≤ 0` are dropped and listed; at least five must remain.
pub fn loglog_fit(curve: &ErrorCurve, n_min_cut: usize) -> Result<RateFit> {
    let (mut used, mut dropped) = (Vec::new(), Vec::new());
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (&n, &e) in curve.ns.iter().zip(&curve.errors) {
        if n < n_min_cut || n == 0 {
            continue;
        }
        if e > 0.0 && e.is_finite() {
            used.push(n);
            x.push((n as f64).ln());
            y.push(e.ln());
        } else {
            dropped.push(n);
        }
    }
    if used.len() < 5 {
        return Err(Error::TooFewPoints {
            got: used.len(),
            need: 5,
        });
    }
    let line = fit_line(&x, &y)?;
    Ok(RateFit {
        slope: line.slope,
        intercept: line.intercept,
        r2: line.r2,
        used,
        dropped,
    })
}

/// `(Σ_k (k+1)^{−α} a_{n,k}) / (n+1)^{−α}` for `0 < α < 1`.
pub fn weighted_row_ratio(row: &SummabilityRow, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfRange(format!("alpha = {alpha} outside (0, 1)")));
    }
    let weighted: f64 = row
        .weights()
        .iter()
        .enumerate()
        .map(|(k, a)| ((k + 1) as f64).powf(-alpha) * a)
        .sum();
    Ok(weighted / ((row.n() + 1) as f64).powf(-alpha))
}

/// Hypotheses on a matrix family checked by [`clause_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// Row means almost nondecreasing.
    I,
    /// Row means almost nonincreasing, with `(n+1)a_{n,0} = O(1)`.
    II,
    /// `Σ|ΔA_{n,k}| = O(n^{−1})`.
    III,
    /// `Σ|Δa_{n,k}| = O(n^{−1})`, with `(n+1)a_{n,n} = O(1)`.
    IV,
    /// Rows of rest bounded variation, with `(n+1)a_{n,0} = O(1)`.
    V,
    /// `(k+1)^{−β}a_{n,k}` of head bounded variation for some `β`, with `(n+1)a_{n,n} = O(1)`.
    VI,
    /// `(n+1)a_{n,n} = O(row sum)`.
    LastWeight,
    /// `(n+1)max{a_{n,0}, a_{n,⌊n/2⌋}} = O(1)`.
    MidWeight,
    /// `(k+1)^η a_{n,k}` nondecreasing for some `η`, plus [`Clause::LastWeight`].
    EtaMonotone,
    /// `|row sum − 1| = O(n^{−α})`.
    RowSum,
}

impl Clause {
    pub const ALL: [Clause; 10] = [
        Clause::I,
        Clause::II,
        Clause::III,
        Clause::IV,
        Clause::V,
        Clause::VI,
        Clause::LastWeight,
        Clause::MidWeight,
        Clause::EtaMonotone,
        Clause::RowSum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Clause::I => "i",
            Clause::II => "ii",
            Clause::III => "iii",
            Clause::IV => "iv",
            Clause::V => "v",
            Clause::VI => "vi",
            Clause::LastWeight => "3",
            Clause::MidWeight => "mid",
            Clause::EtaMonotone => "eta",
            Clause::RowSum => "row-sum",
        }
    }

    pub fn from_name(s: &str) -> Option<Clause> {
        Clause::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Whether `(p, α)` lies in the regime this hypothesis is paired with.
    pub fn applies(&self, p: f64, alpha: f64) -> bool {
        let fractional = alpha > 0.0 && alpha < 1.0;
        match self {
            Clause::I | Clause::II | Clause::MidWeight => p > 1.0 && fractional,
            Clause::III => p > 1.0 && alpha == 1.0,
            Clause::IV | Clause::V | Clause::LastWeight => p == 1.0 && fractional,
            Clause::VI | Clause::EtaMonotone => p == 1.0 && alpha == 1.0,
            Clause::RowSum => alpha > 0.0 && alpha <= 1.0,
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One scaled quantity and the outcome of the growth test on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    /// The inequality tested, in words.
    pub quantity: String,
    /// `sup` of the quantity over the whole range.
    pub sup: f64,
    /// `sup` over `n_lo..=n_mid`.
    pub sup_mid: f64,
    pub n_mid: usize,
    pub bounded: bool,
}

impl Serialize for Evidence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Evidence", 5)?;
        s.serialize_field("quantity", &self.quantity)?;
        s.serialize_field("sup", &json_real(self.sup))?;
        s.serialize_field("sup_mid", &json_real(self.sup_mid))?;
        s.serialize_field("n_mid", &self.n_mid)?;
        s.serialize_field("bounded", &self.bounded)?;
        s.end()
    }
}

/// Finite reals as numbers, the rest as strings (`"inf"`, `"nan"`).
fn json_real(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else if x.is_nan() {
        serde_json::json!("nan")
    } else if x > 0.0 {
        serde_json::json!("inf")
    } else {
        serde_json::json!("-inf")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseVerdict {
    pub clause: Clause,
    /// The condition on the matrix holds over the tested range.
    pub holds: bool,
    /// `(p, α)` lies in the clause's regime.
    pub applicable: bool,
    /// Largest observed constant among the evidence (for the first passing
    /// exponent when the clause searches one).
    pub sup_constant: f64,
    /// Exponent values (`β` or `η`) for which the condition holds.
    pub passing_exponents: Vec<f64>,
    pub evidence: Vec<Evidence>,
}

impl Serialize for ClauseVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ClauseVerdict", 6)?;
        s.serialize_field("clause", self.clause.name())?;
        s.serialize_field("holds", &self.holds)?;
        s.serialize_field("applicable", &self.applicable)?;
        s.serialize_field("sup_constant", &json_real(self.sup_constant))?;
        s.serialize_field("passing_exponents", &self.passing_exponents)?;
        s.serialize_field("evidence", &self.evidence)?;
        s.end()
    }
}

/// All verdicts for one family over one `n` range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseReport {
    pub family: String,
    pub p: f64,
    pub alpha: f64,
    pub n_lo: usize,
    pub n_hi: usize,
    pub clauses: Vec<ClauseVerdict>,
}

impl ClauseReport {
    pub fn get(&self, clause: Clause) -> &ClauseVerdict {
        self.clauses
            .iter()
            .find(|v| v.clause == clause)
            .expect("every clause is reported")
    }

    pub fn holds(&self, clause: Clause) -> bool {
        self.get(clause).holds
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClauseCheckConfig {
    pub n_lo: usize,
    pub n_hi: usize,
    pub beta_grid: Vec<f64>,
    pub eta_grid: Vec<f64>,
}

impl ClauseCheckConfig {
    pub fn new(n_lo: usize, n_hi: usize) -> Self {
        Self {
            n_lo,
            n_hi,
            beta_grid: DEFAULT_EXPONENT_GRID.to_vec(),
            eta_grid: DEFAULT_EXPONENT_GRID.to_vec(),
        }
    }
}

/// Applies the growth test to `q(n)` sampled at `n_lo..=n_hi`.
fn bounded(quantity: impl Into<String>, ns: &[usize], q: &[f64]) -> Evidence {
    let n_mid = ((ns[0] as f64 * *ns.last().unwrap() as f64).sqrt()).floor() as usize;
    let mut sup = f64::NEG_INFINITY;
    let mut sup_mid = f64::NEG_INFINITY;
    for (&n, &v) in ns.iter().zip(q) {
        let v = if v.is_nan() { f64::INFINITY } else { v };
        sup = sup.max(v);
        if n <= n_mid {
            sup_mid = sup_mid.max(v);
        }
    }
    Evidence {
        quantity: quantity.into(),
        sup,
        sup_mid,
        n_mid,
        bounded: sup.is_finite() && sup <= GROWTH_FACTOR * sup_mid + GROWTH_FLOOR,
    }
}

fn verdict(
    clause: Clause,
    p: f64,
    alpha: f64,
    evidence: Vec<Evidence>,
    passing_exponents: Vec<f64>,
) -> ClauseVerdict {
    let holds = evidence.iter().all(|e| e.bounded);
    let sup_constant = evidence.iter().fold(f64::NEG_INFINITY, |m, e| m.max(e.sup));
    ClauseVerdict {
        clause,
        holds,
        applicable: clause.applies(p, alpha),
        sup_constant,
        passing_exponents,
        evidence,
    }
}

/// Per-exponent search: the clause holds when some grid value passes; the
/// reported evidence is that of the first passing value, else of the last tried.
fn exponent_search(
    clause: Clause,
    p: f64,
    alpha: f64,
    grid: &[f64],
    mut evidence_for: impl FnMut(f64) -> Vec<Evidence>,
) -> ClauseVerdict {
    let mut passing = Vec::new();
    let mut shown: Option<Vec<Evidence>> = None;
    let mut last = Vec::new();
    for &x in grid {
        let ev = evidence_for(x);
        if ev.iter().all(|e| e.bounded) {
            passing.push(x);
            if shown.is_none() {
                shown = Some(ev.clone());
            }
        }
        last = ev;
    }
    let evidence = shown.unwrap_or(last);
    let mut v = verdict(clause, p, alpha, evidence, passing);
    v.holds = !v.passing_exponents.is_empty();
    v
}

/// Checks every [`Clause`] on rows `n_lo..=n_hi` of `family`.
pub fn clause_check(
    family: &SummabilityMatrixFamily,
    p: f64,
    alpha: f64,
    config: &ClauseCheckConfig,
) -> Result<ClauseReport> {
    check_exponent(p)?;
    let (lo, hi) = (config.n_lo.max(1), config.n_hi);
    if lo > hi {
        return Err(Error::OutOfRange(format!("empty n range {lo}..={hi}")));
    }
    let ns: Vec<usize> = (lo..=hi).collect();
    let rows = family.rows(ns.iter().copied())?;
    let diags: Vec<_> = rows.iter().map(row_diagnostics).collect();
    let range = format!("n in {lo}..={hi}");
    let series = |f: &dyn Fn(usize) -> f64| -> Vec<f64> { (0..rows.len()).map(f).collect() };

    let head = || {
        bounded(
            format!("(n+1) a_n0 bounded, {range}"),
            &ns,
            &series(&|i| diags[i].head_weight),
        )
    };
    let tail = || {
        bounded(
            format!("(n+1) a_nn bounded, {range}"),
            &ns,
            &series(&|i| diags[i].tail_weight),
        )
    };
    let mean_k = |direction: Direction| {
        series(&|i| {
            let means = mean_transform(&FiniteSequence::from_row(&rows[i]));
            almost_monotone_constant(&means, direction).k
        })
    };

    let mut clauses = Vec::with_capacity(Clause::ALL.len());
    clauses.push(verdict(
        Clause::I,
        p,
        alpha,
        vec![bounded(
            format!("K of A_n,m <= K A_n,l (l >= m) bounded, {range}"),
            &ns,
            &mean_k(Direction::Increasing),
        )],
        vec![],
    ));
    clauses.push(verdict(
        Clause::II,
        p,
        alpha,
        vec![
            bounded(
                format!("K of A_n,l <= K A_n,m (l >= m) bounded, {range}"),
                &ns,
                &mean_k(Direction::Decreasing),
            ),
            head(),
        ],
        vec![],
    ));
    clauses.push(verdict(
        Clause::III,
        p,
        alpha,
        vec![bounded(
            format!("n * sum |A_n,k - A_n,k+1| bounded, {range}"),
            &ns,
            &series(&|i| ns[i] as f64 * diags[i].var_means),
        )],
        vec![],
    ));
    clauses.push(verdict(
        Clause::IV,
        p,
        alpha,
        vec![
            bounded(
                format!("n * sum |a_n,k - a_n,k+1| bounded, {range}"),
                &ns,
                &series(&|i| ns[i] as f64 * diags[i].var_rows),
            ),
            tail(),
        ],
        vec![],
    ));
    clauses.push(verdict(
        Clause::V,
        p,
        alpha,
        vec![
            bounded(
                format!(
                    "K of sum_(k>=m) |a_n,k - a_n,k+1| <= K a_n,m (a_n,n+1 = 0) bounded, {range}"
                ),
                &ns,
                &series(&|i| {
                    bounded_variation_constant(&FiniteSequence::from_row(&rows[i]), Side::Rest).k
                }),
            ),
            head(),
        ],
        vec![],
    ));
    clauses.push(exponent_search(Clause::VI, p, alpha, &config.beta_grid, |beta| {
        vec![
            bounded(
                format!(
                    "K of sum_(k<m) |b_n,k - b_n,k+1| <= K b_n,m, b_n,k = (k+1)^-{beta} a_n,k, bounded, {range}"
                ),
                &ns,
                &series(&|i| {
                    let scaled: Vec<f64> = rows[i]
                        .weights()
                        .iter()
                        .enumerate()
                        .map(|(k, a)| ((k + 1) as f64).powf(-beta) * a)
                        .collect();
                    let seq = FiniteSequence::row(scaled).expect("scaled rows stay nonnegative");
                    bounded_variation_constant(&seq, Side::Head).k
                }),
            ),
            tail(),
        ]
    }));
    let last_weight = || {
        bounded(
            format!("(n+1) a_nn / sum_k a_n,k bounded, {range}"),
            &ns,
            &series(&|i| diags[i].tail_weight / rows[i].row_sum()),
        )
    };
    clauses.push(verdict(
        Clause::LastWeight,
        p,
        alpha,
        vec![last_weight()],
        vec![],
    ));
    clauses.push(verdict(
        Clause::MidWeight,
        p,
        alpha,
        vec![bounded(
            format!("(n+1) max(a_n0, a_n,floor(n/2)) bounded, {range}"),
            &ns,
            &series(&|i| diags[i].mid_weight),
        )],
        vec![],
    ));
    let top = rows.last().expect("range is nonempty");
    clauses.push(exponent_search(
        Clause::EtaMonotone,
        p,
        alpha,
        &config.eta_grid,
        |eta| {
            let scaled: Vec<f64> = top
                .weights()
                .iter()
                .enumerate()
                .map(|(k, a)| ((k + 1) as f64).powf(eta) * a)
                .collect();
            let seq = FiniteSequence::free(scaled).expect("scaled rows stay nonnegative");
            let ok = monotone_test(&seq).nondecreasing;
            vec![
                Evidence {
                    quantity: format!("(k+1)^{eta} a_n,k nondecreasing in k, n = {hi}"),
                    sup: if ok { 1.0 } else { f64::INFINITY },
                    sup_mid: 1.0,
                    n_mid: hi,
                    bounded: ok,
                },
                last_weight(),
            ]
        },
    ));
    clauses.push(verdict(
        Clause::RowSum,
        p,
        alpha,
        vec![bounded(
            format!("(n+1)^{alpha} |sum_k a_n,k - 1| bounded, {range}"),
            &ns,
            &series(&|i| ((ns[i] + 1) as f64).powf(alpha) * rows[i].row_sum_deviation()),
        )],
        vec![],
    ));

    Ok(ClauseReport {
        family: family.label(),
        p,
        alpha,
        n_lo: lo,
        n_hi: hi,
        clauses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::Grid;
    use crate::summability::{make_family, FamilyKind};
    use crate::zoo::{zoo_function, ZooSpec};

    fn family(s: &str) -> SummabilityMatrixFamily {
        make_family(FamilyKind::parse(s).unwrap()).unwrap()
    }

    fn sampled(spec: &str, n: usize) -> SampledPeriodicFunction {
        zoo_function(&spec.parse::<ZooSpec>().unwrap(), Grid::new(n).unwrap()).unwrap()
    }

    fn synthetic(ns: &[usize], e: impl Fn(f64) -> f64) -> ErrorCurve {
        ErrorCurve {
            matrix: "m".into(),
            function: "f".into(),
            p: 2.0,
            ns: ns.to_vec(),
            errors: ns.iter().map(|&n| e(n as f64)).collect(),
            grid_size: 0,
        }
    }

    #[test]
    fn geometric_n_list() {
        assert_eq!(
            geometric_ns(16, 512, 2),
            vec![16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512]
        );
        assert_eq!(geometric_ns(8, 512, 1), vec![8, 16, 32, 64, 128, 256, 512]);
    }

    #[test]
    fn synthetic_fits() {
        let ns = geometric_ns(16, 512, 2);
        let fit = loglog_fit(&synthetic(&ns, |n| 3.0 / n), 16).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-9);
        let fit = loglog_fit(&synthetic(&ns, |n| 0.7 * n.powf(-0.5)), 16).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-9);
        assert!((fit.intercept - 0.7f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn fit_drops_nonpositive_and_cut() {
        let ns = [4, 16, 32, 64, 128, 256, 512];
        let mut c = synthetic(&ns, |n| 1.0 / n);
        c.errors[2] = 0.0;
        let fit = loglog_fit(&c, 16).unwrap();
        assert_eq!(fit.used, vec![16, 64, 128, 256, 512]);
        assert_eq!(fit.dropped, vec![32]);
        c.errors[3] = -1.0;
        assert!(matches!(
            loglog_fit(&c, 16),
            Err(Error::TooFewPoints { got: 4, .. })
        ));
    }

    #[test]
    fn cesaro_cosine_error() {
        let f = sampled("trig_poly(0; 1; 0)", 256);
        let ns = [1, 2, 5, 20];
        let c = error_curve(&family("cesaro"), &f, 2.0, &ns).unwrap();
        for (n, e) in ns.iter().zip(&c.errors) {
            let expected = 1.0 / (*n as f64 + 1.0) / 2f64.sqrt();
            assert!((e - expected).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn identity_reproduces_trig_poly() {
        let f = sampled("trig_poly(0.5; 1,0,-2; 0,0.25,1)", 128);
        let c = error_curve(&family("identity"), &f, 2.0, &[3, 4, 10, 31]).unwrap();
        assert!(c.errors.iter().all(|&e| e <= 1e-10));
    }

    #[test]
    fn grid_too_small_is_rejected() {
        let f = sampled("square", 64);
        assert_eq!(
            error_curve(&family("cesaro"), &f, 1.0, &[4, 16]),
            Err(Error::GridTooSmall {
                grid: 64,
                required: 68,
                degree: 16
            })
        );
    }

    #[test]
    fn csv_rows_layout() {
        let c = ErrorCurve {
            matrix: "norlund(k+1)".into(),
            function: "weierstrass(0.5,8)".into(),
            p: 2.0,
            ns: vec![16],
            errors: vec![0.125],
            grid_size: 4096,
        };
        assert_eq!(
            error_csv(&[c]),
            "matrix,function,p,n,error\nnorlund(k+1),\"weierstrass(0.5,8)\",2.0000000000000000e0,16,1.2500000000000000e-1\n"
        );
    }

    #[test]
    fn weighted_row_ratio_examples() {
        let cesaro = family("cesaro");
        let r = weighted_row_ratio(&cesaro.row(1024).unwrap(), 0.5).unwrap();
        assert!((r - 2.0).abs() < 0.1, "{r}");
        let r = weighted_row_ratio(&cesaro.row(1024).unwrap(), 0.25).unwrap();
        assert!(r <= 1.0 / 0.75 + 0.1);
        for n in [0, 5, 300] {
            assert_eq!(
                weighted_row_ratio(&family("identity").row(n).unwrap(), 0.3).unwrap(),
                1.0
            );
        }
        let row = cesaro.row(3).unwrap();
        assert!(weighted_row_ratio(&row, 0.0).is_err());
        assert!(weighted_row_ratio(&row, 1.0).is_err());
    }

    #[test]
    fn growth_test() {
        let ns: Vec<usize> = (1..=256).collect();
        let flat: Vec<f64> = ns.iter().map(|&n| 2.0 - 1.0 / n as f64).collect();
        assert!(bounded("flat", &ns, &flat).bounded);
        let linear: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let e = bounded("linear", &ns, &linear);
        assert!(!e.bounded);
        assert_eq!((e.n_mid, e.sup, e.sup_mid), (16, 256.0, 16.0));
        let mut spiky = flat.clone();
        spiky[100] = f64::INFINITY;
        assert!(!bounded("spiky", &ns, &spiky).bounded);
    }

    #[test]
    fn cesaro_clauses() {
        let r = clause_check(&family("cesaro"), 2.0, 0.7, &ClauseCheckConfig::new(1, 128)).unwrap();
        assert!(r.holds(Clause::I) && r.holds(Clause::II) && r.holds(Clause::III));
        assert!(r.get(Clause::III).sup_constant < 1e-12);
        assert!(r.get(Clause::I).applicable && !r.get(Clause::V).applicable);
        let r = clause_check(&family("cesaro"), 1.0, 0.5, &ClauseCheckConfig::new(1, 128)).unwrap();
        let v = r.get(Clause::V);
        assert!(v.holds && v.applicable);
        assert!((v.evidence[0].sup - 1.0).abs() < 1e-12);
        assert!((v.evidence[1].sup - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_norlund_vi() {
        let r = clause_check(
            &family("norlund(k+1)"),
            1.0,
            1.0,
            &ClauseCheckConfig::new(1, 256),
        )
        .unwrap();
        let vi = r.get(Clause::VI);
        assert!(vi.holds && vi.applicable);
        assert!(vi.passing_exponents.contains(&1.0));
        assert!(!vi.passing_exponents.contains(&2.0));
        // (n+1)^2 / P_n tends to 2
        assert!((vi.evidence[1].sup - 2.0).abs() < 0.01);
    }

    #[test]
    fn geometric_norlund_fails_last_weight() {
        let r = clause_check(
            &family("norlund(2^k)"),
            1.0,
            1.0,
            &ClauseCheckConfig::new(1, 256),
        )
        .unwrap();
        assert!(!r.holds(Clause::LastWeight));
        assert!(!r.holds(Clause::EtaMonotone));
        assert!(r.holds(Clause::MidWeight));
    }

    #[test]
    fn verdict_json_keys() {
        let r = clause_check(
            &family("identity"),
            2.0,
            0.5,
            &ClauseCheckConfig::new(1, 32),
        )
        .unwrap();
        let json = serde_json::to_value(r.get(Clause::V)).unwrap();
        assert_eq!(json["clause"], "v");
        assert_eq!(json["holds"], false);
        assert_eq!(json["sup_constant"], "inf");
    }
}
