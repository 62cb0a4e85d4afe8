//! Fourier analysis and synthesis on uniform grids.
//!
//! Coefficients follow the real convention
//! `S_n(f;x) = a_0/2 + Σ_{k=1}^{n} (a_k cos kx + b_k sin kx)`.
//! Every mean of the partial sums (Cesàro, de la Vallée Poussin, general
//! matrix means) is evaluated as a single synthesis of damped coefficients
//! `U_k ↦ w_k U_k`, so no intermediate `S_k` is ever materialized.

use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::periodic::{Grid, SampledPeriodicFunction};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Real Fourier coefficients `a_0, a_1..a_M, b_1..b_M` of a sampled function.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub a0: f64,
    /// `a[k-1]` holds `a_k`.
    pub a: Vec<f64>,
    /// `b[k-1]` holds `b_k`.
    pub b: Vec<f64>,
    pub source_grid_size: usize,
}

impl FourierCoefficients {
    /// Highest harmonic `M` held.
    pub fn max_degree(&self) -> usize {
        self.a.len()
    }

    /// `(a_k, b_k)`, with `(a_0, 0)` for `k = 0`.
    pub fn pair(&self, k: usize) -> (f64, f64) {
        if k == 0 {
            (self.a0, 0.0)
        } else {
            (self.a[k - 1], self.b[k - 1])
        }
    }

    /// Coefficients of `Σ w_k U_k`; harmonics beyond `w.len() - 1` are dropped.
    pub fn damped(&self, weights: &[f64]) -> Result<FourierCoefficients> {
        let degree = weights.len().saturating_sub(1);
        self.check_degree(degree)?;
        let w0 = weights.first().copied().unwrap_or(0.0);
        Ok(FourierCoefficients {
            a0: w0 * self.a0,
            a: (1..=degree).map(|k| weights[k] * self.a[k - 1]).collect(),
            b: (1..=degree).map(|k| weights[k] * self.b[k - 1]).collect(),
            source_grid_size: self.source_grid_size,
        })
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_degree() {
            return Err(Error::DegreeOverflow {
                degree,
                max: self.max_degree(),
            });
        }
        Ok(())
    }
}

fn fft_forward(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(&mut buf));
    buf
}

fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Discrete Fourier coefficients up to harmonic `M`:
/// `a_k = (2/N) Σ f(x_j) cos(k x_j)`, `b_k = (2/N) Σ f(x_j) sin(k x_j)`.
pub fn analyze(f: &SampledPeriodicFunction, max_degree: usize) -> Result<FourierCoefficients> {
    let grid = f.grid();
    if max_degree > grid.max_harmonic() {
        return Err(Error::Aliasing(format!(
            "M = {max_degree} exceeds floor((N-1)/2) = {} for N = {}",
            grid.max_harmonic(),
            grid.size()
        )));
    }
    let spectrum = fft_forward(f.values());
    let scale = 2.0 / grid.size() as f64;
    Ok(FourierCoefficients {
        a0: scale * spectrum[0].re,
        a: (1..=max_degree).map(|k| scale * spectrum[k].re).collect(),
        b: (1..=max_degree).map(|k| -scale * spectrum[k].im).collect(),
        source_grid_size: grid.size(),
    })
}

/// `Σ_{k=0}^{n} w_k U_k(f; x_j)` on `grid`, with `n = weights.len() - 1`.
pub fn synthesize(
    c: &FourierCoefficients,
    weights: &[f64],
    grid: Grid,
    label: impl Into<String>,
) -> Result<SampledPeriodicFunction> {
    let degree = weights.len().saturating_sub(1);
    c.check_degree(degree)?;
    if degree > grid.max_harmonic() {
        return Err(Error::Aliasing(format!(
            "degree {degree} cannot be synthesized on N = {}",
            grid.size()
        )));
    }
    let n = grid.size();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    if let Some(&w0) = weights.first() {
        buf[0] = Complex64::new(w0 * c.a0 / 2.0, 0.0);
    }
    for k in 1..=degree {
        let (a, b) = c.pair(k);
        let z = Complex64::new(a, -b) * (weights[k] / 2.0);
        buf[k] = z;
        buf[n - k] = z.conj();
    }
    fft_inverse(&mut buf);
    SampledPeriodicFunction::new(grid, buf.iter().map(|z| z.re).collect(), label)
}

/// Damping factors `1 − k/(n+1)` of the Cesàro mean `σ_n`.
pub fn cesaro_damping(n: usize) -> Vec<f64> {
    (0..=n).map(|k| 1.0 - k as f64 / (n + 1) as f64).collect()
}

/// Damping factors of `V_n = 2σ_{2n+1} − σ_n`: one for `k ≤ n+1`,
/// `(2n+2−k)/(n+1)` above.
pub fn vallee_poussin_damping(n: usize) -> Vec<f64> {
    let wide = cesaro_damping(2 * n + 1);
    let narrow = cesaro_damping(n);
    wide.iter()
        .enumerate()
        .map(|(k, w)| 2.0 * w - narrow.get(k).copied().unwrap_or(0.0))
        .collect()
}

/// Fourier partial sum `S_n`.
pub fn partial_sum(
    c: &FourierCoefficients,
    n: usize,
    grid: Grid,
) -> Result<SampledPeriodicFunction> {
    synthesize(c, &vec![1.0; n + 1], grid, format!("S_{n}"))
}

/// Single harmonic `U_k`; `U_0 = a_0/2`.
pub fn harmonic_term(
    c: &FourierCoefficients,
    k: usize,
    grid: Grid,
) -> Result<SampledPeriodicFunction> {
    let mut w = vec![0.0; k + 1];
    w[k] = 1.0;
    synthesize(c, &w, grid, format!("U_{k}"))
}

/// Cesàro mean `σ_n = (1/(n+1)) Σ_{k=0}^{n} S_k`.
pub fn cesaro_mean(
    c: &FourierCoefficients,
    n: usize,
    grid: Grid,
) -> Result<SampledPeriodicFunction> {
    synthesize(c, &cesaro_damping(n), grid, format!("sigma_{n}"))
}

/// de la Vallée Poussin mean `V_n = 2σ_{2n+1} − σ_n`, a polynomial of degree
/// `2n+1` that reproduces harmonics `0..=n+1`.
pub fn vallee_poussin(
    c: &FourierCoefficients,
    n: usize,
    grid: Grid,
) -> Result<SampledPeriodicFunction> {
    synthesize(c, &vallee_poussin_damping(n), grid, format!("V_{n}"))
}
