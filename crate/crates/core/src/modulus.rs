//! Integral modulus of continuity `ω_p(f; δ) = sup_{0<|h|≤δ} ‖f(·+h) − f‖_p`
//! over grid-aligned shifts, and Lipschitz exponent fits.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodic::{check_exponent, discrete_lp, SampledPeriodicFunction};
use crate::regression::fit_line;

/// Shifts examined per modulus when the grid has more aligned shifts than this.
pub const DEFAULT_SHIFT_COUNT: usize = 4096;

/// `‖f(· + s·2π/N) − f‖_p` for an integer shift `s`.
fn aligned_diff_norm(values: &[f64], s: usize, p: f64) -> f64 {
    let n = values.len();
    let diffs: Vec<f64> = (0..n).map(|j| values[(j + s) % n] - values[j]).collect();
    discrete_lp(&diffs, p)
}

/// `((1/N) Σ |f(x_j + h) − f(x_j)|^p)^{1/p}`, with `h` rounded to the
/// nearest multiple of the grid spacing.
pub fn shift_diff_norm(f: &SampledPeriodicFunction, h: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(h.abs() <= PI * (1.0 + 1e-12)) {
        return Err(Error::OutOfRange(format!("shift h = {h} outside [-π, π]")));
    }
    let n = f.grid().size() as isize;
    let s = (h / f.grid().spacing()).round() as isize;
    Ok(aligned_diff_norm(f.values(), s.rem_euclid(n) as usize, p))
}

/// Aligned shifts examined for a grid of `size` points: every shift up to
/// `size/2` when there are at most `shift_count` of them, otherwise a
/// geometric ladder of `shift_count` values from 1 to `size/2`.
///
/// The set does not depend on `δ`, so the sets used for `δ₁ ≤ δ₂` are nested.
fn shift_ladder(size: usize, shift_count: usize) -> Vec<usize> {
    let top = size / 2;
    if top <= shift_count {
        return (1..=top).collect();
    }
    let ratio = (top as f64).ln() / (shift_count - 1) as f64;
    let mut shifts: Vec<usize> = (0..shift_count)
        .map(|i| ((i as f64 * ratio).exp().round() as usize).clamp(1, top))
        .collect();
    shifts.push(top);
    shifts.dedup();
    shifts
}

fn largest_shift(f: &SampledPeriodicFunction, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta <= PI * (1.0 + 1e-12)) {
        return Err(Error::OutOfRange(format!("delta = {delta} outside (0, π]")));
    }
    let s = (delta / f.grid().spacing() * (1.0 + 1e-12)).floor() as usize;
    Ok(s.min(f.grid().size() / 2))
}

/// `ω_p(f; δ)` as the max of the shifted difference norm over aligned shifts
/// in `(0, δ]`. Zero when `δ` is below one grid step.
pub fn modulus(f: &SampledPeriodicFunction, delta: f64, p: f64, shift_count: usize) -> Result<f64> {
    Ok(modulus_curve(f, p, &[delta], shift_count)?.omegas[0])
}

/// Sampled `δ ↦ ω_p(f; δ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusCurve {
    pub p: f64,
    pub deltas: Vec<f64>,
    pub omegas: Vec<f64>,
}

impl ModulusCurve {
    /// CSV with header `delta,omega` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["delta", "omega"]).expect("in-memory write");
        for (d, o) in self.deltas.iter().zip(&self.omegas) {
            w.write_record([crate::sig17(*d), crate::sig17(*o)])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
    }
}

/// Moduli at every `δ` in `deltas` (strictly increasing, within `(0, π]`).
pub fn modulus_curve(
    f: &SampledPeriodicFunction,
    p: f64,
    deltas: &[f64],
    shift_count: usize,
) -> Result<ModulusCurve> {
    check_exponent(p)?;
    if shift_count < 8 {
        return Err(Error::OutOfRange(format!(
            "shift_count = {shift_count} (need at least 8)"
        )));
    }
    if deltas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::OutOfRange(
            "deltas must be strictly increasing".into(),
        ));
    }
    let limits = deltas
        .iter()
        .map(|&d| largest_shift(f, d))
        .collect::<Result<Vec<_>>>()?;
    let reach = limits.last().copied().unwrap_or(0);
    let shifts: Vec<usize> = shift_ladder(f.grid().size(), shift_count)
        .into_iter()
        .filter(|&s| s <= reach)
        .collect();
    let norms: Vec<f64> = shifts
        .iter()
        .map(|&s| aligned_diff_norm(f.values(), s, p))
        .collect();
    let mut omegas = Vec::with_capacity(deltas.len());
    let (mut i, mut running) = (0, 0.0_f64);
    for &limit in &limits {
        while i < shifts.len() && shifts[i] <= limit {
            running = running.max(norms[i]);
            i += 1;
        }
        omegas.push(running);
    }
    Ok(ModulusCurve {
        p,
        deltas: deltas.to_vec(),
        omegas,
    })
}

/// Seven dyadic points `π/256, π/128, …, π/4`.
pub fn default_delta_grid() -> Vec<f64> {
    (0..7).map(|i| PI / 256.0 * f64::from(1u32 << i)).collect()
}

/// Fitted exponent of `ω_p(f; δ) ≍ δ^α`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipFit {
    pub p: f64,
    /// NaN when some modulus vanishes.
    pub alpha_hat: f64,
    pub r2: f64,
    pub delta_range: (f64, f64),
    pub diagnostic: Option<String>,
    pub curve: ModulusCurve,
}

/// Least-squares slope of `log ω` against `log δ`.
///
/// Needs at least five deltas spanning two dyadic octaves.
pub fn lip_exponent_fit(f: &SampledPeriodicFunction, p: f64, deltas: &[f64]) -> Result<LipFit> {
    if deltas.len() < 5 {
        return Err(Error::TooFewPoints {
            got: deltas.len(),
            need: 5,
        });
    }
    let (lo, hi) = (deltas[0], deltas[deltas.len() - 1]);
    if !(hi >= 4.0 * lo * (1.0 - 1e-12)) {
        return Err(Error::OutOfRange(format!(
            "deltas span [{lo}, {hi}], less than two octaves"
        )));
    }
    let curve = modulus_curve(f, p, deltas, DEFAULT_SHIFT_COUNT)?;
    if let Some(i) = curve.omegas.iter().position(|&w| w <= 0.0) {
        return Ok(LipFit {
            p,
            alpha_hat: f64::NAN,
            r2: 0.0,
            delta_range: (lo, hi),
            diagnostic: Some(format!(
                "modulus vanishes at delta = {}; exponent undefined",
                curve.deltas[i]
            )),
            curve,
        });
    }
    let x: Vec<f64> = curve.deltas.iter().map(|d| d.ln()).collect();
    let y: Vec<f64> = curve.omegas.iter().map(|w| w.ln()).collect();
    let line = fit_line(&x, &y)?;
    Ok(LipFit {
        p,
        alpha_hat: line.slope,
        r2: line.r2,
        delta_range: (lo, hi),
        diagnostic: None,
        curve,
    })
}
