//! Membership tests and minimal constants for nonnegative sequence classes.
//!
//! Base classes: NIS/NDS (monotone), AMDS/AMIS (almost monotone),
//! RBVS/HBVS (rest/head bounded variation). Each has a mean variant
//! (NIMS, NDMS, AMDMS, AMIMS, RBVMS, HBVMS) defined by membership of the
//! running means `C_m = (1/(m+1)) Σ_{k≤m} c_k` in the base class.
//!
//! On a finite sequence every pairwise condition can be checked exactly, so
//! the minimal constant `K(c)` is computed rather than estimated. Almost
//! monotone and bounded-variation classes are then membership ⇔ `K < ∞`;
//! an infinite constant only arises from a zero on the right-hand side of
//! an inequality whose left-hand side is positive.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::summability::SummabilityRow;

/// Relative tolerance under which two entries count as tied in monotonicity tests.
pub const TIE_RTOL: f64 = 1e-12;

/// How the end of a finite sequence is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    /// The sequence stops at its last entry.
    #[default]
    Free,
    /// A matrix row `(a_{n,k})_{k≤n}`: an implicit `c_L = 0` follows.
    Row,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSequence {
    values: Vec<f64>,
    semantics: Semantics,
}

impl FiniteSequence {
    pub fn new(values: Vec<f64>, semantics: Semantics) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::OutOfRange("empty sequence".into()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite(index));
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        Ok(Self { values, semantics })
    }

    pub fn free(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Semantics::Free)
    }

    pub fn row(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Semantics::Row)
    }

    pub fn from_row(row: &SummabilityRow) -> Self {
        Self {
            values: row.weights().to_vec(),
            semantics: Semantics::Row,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `|c_k − c_{k+1}|` for every step the semantics admits.
    pub fn steps(&self) -> Vec<f64> {
        let mut d: Vec<f64> = self
            .values
            .windows(2)
            .map(|w| (w[0] - w[1]).abs())
            .collect();
        if self.semantics == Semantics::Row {
            d.push(*self.values.last().unwrap());
        }
        d
    }
}

/// `C_m = (1/(m+1)) Σ_{k=0}^{m} c_k`.
pub fn mean_transform(c: &FiniteSequence) -> FiniteSequence {
    FiniteSequence {
        values: crate::summability::running_means(&c.values),
        semantics: c.semantics,
    }
}

/// `a ≥ b` up to [`TIE_RTOL`].
fn at_least(a: f64, b: f64) -> bool {
    a >= b || (b - a) <= TIE_RTOL * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneVerdict {
    pub nonincreasing: bool,
    pub nondecreasing: bool,
    /// First adjacent pair breaking monotone decrease.
    pub nis_witness: Option<(usize, usize)>,
    pub nds_witness: Option<(usize, usize)>,
}

pub fn monotone_test(c: &FiniteSequence) -> MonotoneVerdict {
    let v = &c.values;
    let nis_witness = (0..v.len().saturating_sub(1))
        .find(|&k| !at_least(v[k], v[k + 1]))
        .map(|k| (k, k + 1));
    let nds_witness = (0..v.len().saturating_sub(1))
        .find(|&k| !at_least(v[k + 1], v[k]))
        .map(|k| (k, k + 1));
    MonotoneVerdict {
        nonincreasing: nis_witness.is_none(),
        nondecreasing: nds_witness.is_none(),
        nis_witness,
        nds_witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Increasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Rest,
    Head,
}

/// Minimal constant of a class inequality, `∞` when none exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassConstant {
    pub k: f64,
    /// Index pair certifying `K = ∞`: `(n, m)` for almost-monotone classes,
    /// `(m, k)` with `|Δc_k| > 0 = c_m` for bounded-variation classes.
    pub witness: Option<(usize, usize)>,
}

impl ClassConstant {
    pub fn is_finite(&self) -> bool {
        self.k.is_finite()
    }
}

/// Minimal `K` with `c_n ≤ K c_m` (decreasing) or `c_m ≤ K c_n` (increasing)
/// for all `n ≥ m`. Computed from running minima in `O(L)`.
pub fn almost_monotone_constant(c: &FiniteSequence, direction: Direction) -> ClassConstant {
    let v = &c.values;
    let mut k = 1.0_f64;
    match direction {
        Direction::Decreasing => {
            // c_n / min_{m≤n} c_m
            let mut min_idx = 0;
            for n in 0..v.len() {
                if v[n] < v[min_idx] {
                    min_idx = n;
                }
                if v[n] > 0.0 {
                    if v[min_idx] == 0.0 {
                        return ClassConstant {
                            k: f64::INFINITY,
                            witness: Some((n, min_idx)),
                        };
                    }
                    k = k.max(v[n] / v[min_idx]);
                }
            }
        }
        Direction::Increasing => {
            // c_m / min_{n≥m} c_n
            let mut min_idx = v.len() - 1;
            for m in (0..v.len()).rev() {
                if v[m] < v[min_idx] {
                    min_idx = m;
                }
                if v[m] > 0.0 {
                    if v[min_idx] == 0.0 {
                        return ClassConstant {
                            k: f64::INFINITY,
                            witness: Some((min_idx, m)),
                        };
                    }
                    k = k.max(v[m] / v[min_idx]);
                }
            }
        }
    }
    ClassConstant { k, witness: None }
}

/// Minimal `K` with `Σ_{k≥m} |Δc_k| ≤ K c_m` (rest) or `Σ_{k<m} |Δc_k| ≤ K c_m`
/// (head). The head side ranges over `m` up to the last nonzero entry.
pub fn bounded_variation_constant(c: &FiniteSequence, side: Side) -> ClassConstant {
    let v = &c.values;
    let steps = c.steps();
    let mut k = 0.0_f64;
    let mut check = |m: usize, variation: f64, first_step: usize| -> Option<ClassConstant> {
        if v[m] > 0.0 {
            k = k.max(variation / v[m]);
        } else if variation > 0.0 {
            let at = (first_step..steps.len())
                .find(|&i| steps[i] > 0.0)
                .unwrap_or(first_step);
            return Some(ClassConstant {
                k: f64::INFINITY,
                witness: Some((m, at)),
            });
        }
        None
    };
    match side {
        Side::Rest => {
            // suffix sums, accumulated from the far end
            let mut suffix = vec![0.0; v.len()];
            let mut acc = 0.0;
            for i in (0..steps.len()).rev() {
                acc += steps[i];
                if i < v.len() {
                    suffix[i] = acc;
                }
            }
            let mut worst = None;
            for (m, &tail) in suffix.iter().enumerate() {
                if let Some(inf) = check(m, tail, m) {
                    worst = Some(inf);
                    break;
                }
            }
            if let Some(inf) = worst {
                return inf;
            }
        }
        Side::Head => {
            let last = match v.iter().rposition(|&x| x > 0.0) {
                Some(i) => i,
                None => {
                    return ClassConstant {
                        k: 0.0,
                        witness: None,
                    }
                }
            };
            let mut acc = 0.0;
            for m in 0..=last {
                if m > 0 {
                    acc += steps[m - 1];
                }
                if let Some(inf) = check(m, acc, 0) {
                    return inf;
                }
            }
        }
    }
    ClassConstant { k, witness: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceClass {
    Nis,
    Nds,
    Amds,
    Amis,
    Rbvs,
    Hbvs,
    Nims,
    Ndms,
    Amdms,
    Amims,
    Rbvms,
    Hbvms,
}

impl SequenceClass {
    pub const ALL: [SequenceClass; 12] = [
        SequenceClass::Nis,
        SequenceClass::Nds,
        SequenceClass::Amds,
        SequenceClass::Amis,
        SequenceClass::Rbvs,
        SequenceClass::Hbvs,
        SequenceClass::Nims,
        SequenceClass::Ndms,
        SequenceClass::Amdms,
        SequenceClass::Amims,
        SequenceClass::Rbvms,
        SequenceClass::Hbvms,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SequenceClass::Nis => "NIS",
            SequenceClass::Nds => "NDS",
            SequenceClass::Amds => "AMDS",
            SequenceClass::Amis => "AMIS",
            SequenceClass::Rbvs => "RBVS",
            SequenceClass::Hbvs => "HBVS",
            SequenceClass::Nims => "NIMS",
            SequenceClass::Ndms => "NDMS",
            SequenceClass::Amdms => "AMDMS",
            SequenceClass::Amims => "AMIMS",
            SequenceClass::Rbvms => "RBVMS",
            SequenceClass::Hbvms => "HBVMS",
        }
    }
}

impl fmt::Display for SequenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassRecord {
    pub class: SequenceClass,
    pub member: bool,
    /// Minimal constant; `1` for monotone members, `∞` for non-members.
    pub k: f64,
    pub witness: Option<(usize, usize)>,
}

impl Serialize for ClassRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ClassRecord", 4)?;
        s.serialize_field("class", self.class.name())?;
        s.serialize_field("member", &self.member)?;
        if self.k.is_finite() {
            s.serialize_field("K", &self.k)?;
        } else {
            s.serialize_field("K", "inf")?;
        }
        s.serialize_field("witness", &self.witness.map(|(a, b)| [a, b]))?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ClassReport {
    pub records: Vec<ClassRecord>,
}

impl ClassReport {
    pub fn get(&self, class: SequenceClass) -> &ClassRecord {
        self.records
            .iter()
            .find(|r| r.class == class)
            .expect("every class is reported")
    }

    pub fn member(&self, class: SequenceClass) -> bool {
        self.get(class).member
    }

    pub fn constant(&self, class: SequenceClass) -> f64 {
        self.get(class).k
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("class report serializes")
    }
}

fn base_records(c: &FiniteSequence, classes: [SequenceClass; 6]) -> Vec<ClassRecord> {
    let [nis, nds, amds, amis, rbvs, hbvs] = classes;
    let mono = monotone_test(c);
    let monotone = |class, ok: bool, witness| ClassRecord {
        class,
        member: ok,
        k: if ok { 1.0 } else { f64::INFINITY },
        witness,
    };
    let constant = |class, cc: ClassConstant| ClassRecord {
        class,
        member: cc.is_finite(),
        k: cc.k,
        witness: cc.witness,
    };
    vec![
        monotone(nis, mono.nonincreasing, mono.nis_witness),
        monotone(nds, mono.nondecreasing, mono.nds_witness),
        constant(amds, almost_monotone_constant(c, Direction::Decreasing)),
        constant(amis, almost_monotone_constant(c, Direction::Increasing)),
        constant(rbvs, bounded_variation_constant(c, Side::Rest)),
        constant(hbvs, bounded_variation_constant(c, Side::Head)),
    ]
}

/// All twelve verdicts: base classes on `c`, mean classes on `mean_transform(c)`.
pub fn classify(c: &FiniteSequence) -> ClassReport {
    use SequenceClass::*;
    let mut records = base_records(c, [Nis, Nds, Amds, Amis, Rbvs, Hbvs]);
    records.extend(base_records(
        &mean_transform(c),
        [Nims, Ndms, Amdms, Amims, Rbvms, Hbvms],
    ));
    ClassReport { records }
}

/// A failed embedding check found by [`embedding_harness`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub relation: String,
    pub sample: usize,
    pub sequence: Vec<f64>,
    pub detail: String,
}

/// Seeded random sequences for each antecedent class.
pub mod generators {
    use super::*;

    fn length(rng: &mut ChaCha8Rng, max_len: usize) -> usize {
        rng.gen_range(1..=max_len.max(1))
    }

    fn uniforms(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        let quantize = rng.gen_bool(0.2);
        (0..len)
            .map(|_| {
                let u: f64 = 1.0 - rng.gen::<f64>();
                // coarse values produce ties
                if quantize {
                    (u * 8.0).ceil() / 8.0
                } else {
                    u
                }
            })
            .collect()
    }

    /// Sorted descending uniforms, sometimes ending in a block of zeros.
    pub fn nonincreasing(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
        let len = length(rng, max_len);
        let mut v = uniforms(rng, len);
        v.sort_by(|a, b| b.total_cmp(a));
        if rng.gen_bool(0.2) {
            let zeros = rng.gen_range(0..=len / 2);
            v.iter_mut().rev().take(zeros).for_each(|x| *x = 0.0);
        }
        v
    }

    /// Sorted ascending uniforms, sometimes starting with a block of zeros.
    pub fn nondecreasing(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
        let mut v = nonincreasing(rng, max_len);
        v.reverse();
        v
    }

    fn noisy(rng: &mut ChaCha8Rng, base: Vec<f64>, k: f64) -> Vec<f64> {
        let top = k.sqrt();
        base.into_iter()
            .map(|x| x * rng.gen_range(1.0..=top))
            .collect()
    }

    /// Positive nonincreasing sequence times noise in `[1, √K]`; in AMDS with constant `≤ √K`.
    pub fn almost_decreasing(rng: &mut ChaCha8Rng, max_len: usize, k: f64) -> Vec<f64> {
        let len = length(rng, max_len);
        let mut v = uniforms(rng, len);
        v.sort_by(|a, b| b.total_cmp(a));
        noisy(rng, v, k)
    }

    pub fn almost_increasing(rng: &mut ChaCha8Rng, max_len: usize, k: f64) -> Vec<f64> {
        let mut v = almost_decreasing(rng, max_len, k);
        v.reverse();
        v
    }

    /// Positive entries with zeros dropped in at random positions.
    pub fn sparse(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
        let len = length(rng, max_len);
        let p_zero = rng.gen_range(0.0..0.5);
        uniforms(rng, len)
            .into_iter()
            .map(|x| if rng.gen_bool(p_zero) { 0.0 } else { x })
            .collect()
    }

    /// Positive entries preceded by a (possibly empty) block of zeros.
    pub fn leading_zeros(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
        let len = length(rng, max_len);
        let zeros = rng.gen_range(0..len);
        let mut v = uniforms(rng, len);
        v.iter_mut().take(zeros).for_each(|x| *x = 0.0);
        v
    }
}

/// Checks the embeddings between the classes on seeded random samples:
///
/// * `NIS ⊂ NIMS`, `NDS ⊂ NDMS`
/// * `AMDS ⊂ AMDMS`, `AMIS ⊂ AMIMS`, with the mean constant at most `max(1, K²)`
/// * `NIS ⊂ RBVS ⊂ AMDS` (row semantics) and `NDS ⊂ HBVS ⊂ AMIS`
///
/// Returns the violations found; an empty list means every check passed.
pub fn embedding_harness(sample_count: usize, max_len: usize, seed: u64) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut report = |relation: &str, sample: usize, seq: &[f64], detail: String| {
        violations.push(Violation {
            relation: relation.to_string(),
            sample,
            sequence: seq.to_vec(),
            detail,
        });
    };
    let stream = |id: u64| ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ id);
    use SequenceClass::*;

    let mut rng = stream(1);
    for i in 0..sample_count {
        let v = generators::nonincreasing(&mut rng, max_len);
        let r = classify(&FiniteSequence::row(v.clone()).expect("generated sequences are valid"));
        if !r.member(Nis) {
            report(
                "generator NIS",
                i,
                &v,
                "generated sequence is not NIS".into(),
            );
        }
        if !r.member(Nims) {
            report("NIS -> NIMS", i, &v, format!("{:?}", r.get(Nims).witness));
        }
        if !r.member(Rbvs) {
            report("NIS -> RBVS", i, &v, format!("{:?}", r.get(Rbvs).witness));
        }
        if !r.member(Amds) {
            report("NIS -> AMDS", i, &v, format!("{:?}", r.get(Amds).witness));
        }
    }

    let mut rng = stream(2);
    for i in 0..sample_count {
        let v = generators::nondecreasing(&mut rng, max_len);
        let r = classify(&FiniteSequence::free(v.clone()).expect("generated sequences are valid"));
        if !r.member(Nds) {
            report(
                "generator NDS",
                i,
                &v,
                "generated sequence is not NDS".into(),
            );
        }
        if !r.member(Ndms) {
            report("NDS -> NDMS", i, &v, format!("{:?}", r.get(Ndms).witness));
        }
        if !r.member(Hbvs) {
            report("NDS -> HBVS", i, &v, format!("{:?}", r.get(Hbvs).witness));
        }
        if !r.member(Amis) {
            report("NDS -> AMIS", i, &v, format!("{:?}", r.get(Amis).witness));
        }
    }

    let mut am_check = |relation: &str, rng: &mut ChaCha8Rng, decreasing: bool| {
        for i in 0..sample_count {
            let bound: f64 = rng.gen_range(1.0..=10.0);
            let v = if decreasing {
                generators::almost_decreasing(rng, max_len, bound)
            } else {
                generators::almost_increasing(rng, max_len, bound)
            };
            let r =
                classify(&FiniteSequence::free(v.clone()).expect("generated sequences are valid"));
            let (base, mean) = if decreasing {
                (Amds, Amdms)
            } else {
                (Amis, Amims)
            };
            let k = r.constant(base);
            if !(k <= bound.sqrt() * (1.0 + TIE_RTOL)) {
                report(
                    relation,
                    i,
                    &v,
                    format!("generator constant {k} exceeds sqrt({bound})"),
                );
            }
            let km = r.constant(mean);
            let limit = 1f64.max(k * k) * (1.0 + TIE_RTOL);
            if !(km <= limit) {
                report(
                    relation,
                    i,
                    &v,
                    format!("mean constant {km} exceeds max(1, K^2) = {limit}"),
                );
            }
        }
    };
    am_check("AMDS -> AMDMS", &mut stream(3), true);
    am_check("AMIS -> AMIMS", &mut stream(4), false);

    let mut rng = stream(5);
    for i in 0..sample_count {
        let v = generators::sparse(&mut rng, max_len);
        for semantics in [Semantics::Row, Semantics::Free] {
            let r = classify(&FiniteSequence::new(v.clone(), semantics).expect("valid"));
            if r.member(Rbvs) && !r.member(Amds) {
                report("RBVS -> AMDS", i, &v, format!("{semantics:?} semantics"));
            }
        }
    }

    let mut rng = stream(6);
    for i in 0..sample_count {
        let v = generators::leading_zeros(&mut rng, max_len);
        let r = classify(&FiniteSequence::free(v.clone()).expect("valid"));
        if r.member(Hbvs) && !r.member(Amis) {
            report("HBVS -> AMIS", i, &v, format!("{:?}", r.get(Amis).witness));
        }
    }

    violations
}
