//! Uniform periodic grids and L^p norms with the `1/(2π)` normalization.
//!
//! Integrals over one period are evaluated with the rectangle rule on the
//! nodes `x_j = 2πj/N`. For periodic data this coincides with the trapezoid
//! rule and integrates trigonometric polynomials of degree `< N` exactly.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest grid accepted by [`Grid::new`].
pub const MIN_GRID_SIZE: usize = 8;

/// Uniform grid of `N` nodes on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    size: usize,
}

impl Grid {
    pub fn new(size: usize) -> Result<Self> {
        if size < MIN_GRID_SIZE {
            return Err(Error::GridTooCoarse(size));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.size as f64
    }

    /// Node `x_j = 2πj/N`.
    pub fn node(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.size as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.size).map(|j| self.node(j)).collect()
    }

    /// Largest harmonic order representable without aliasing, `floor((N-1)/2)`.
    pub fn max_harmonic(&self) -> usize {
        (self.size - 1) / 2
    }

    /// Table of `(cos(2πm/N), sin(2πm/N))` for `m = 0..N`.
    ///
    /// `cos(k x_j)` is then read at index `(k*j) mod N`, which keeps the
    /// argument reduction exact for any harmonic order.
    pub fn trig_table(&self) -> TrigTable {
        let n = self.size;
        let cos = (0..n)
            .map(|m| (2.0 * PI * m as f64 / n as f64).cos())
            .collect();
        let sin = (0..n)
            .map(|m| (2.0 * PI * m as f64 / n as f64).sin())
            .collect();
        TrigTable { size: n, cos, sin }
    }
}

/// Cosine/sine values on the grid's roots of unity.
#[derive(Debug, Clone)]
pub struct TrigTable {
    size: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigTable {
    /// `(cos(k x_j), sin(k x_j))`.
    #[inline]
    pub fn at(&self, k: usize, j: usize) -> (f64, f64) {
        let m = ((k as u128 * j as u128) % self.size as u128) as usize;
        (self.cos[m], self.sin[m])
    }
}

/// Lipschitz class `Lip(α, p)` a zoo function is known to belong to.
///
/// `p = None` means membership for every `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimedClass {
    pub alpha: f64,
    pub p: Option<f64>,
}

/// Values of a 2π-periodic function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPeriodicFunction {
    grid: Grid,
    values: Vec<f64>,
    label: String,
    claimed_class: Option<ClaimedClass>,
}

impl SampledPeriodicFunction {
    pub fn new(grid: Grid, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::LengthMismatch {
                expected: grid.size(),
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            grid,
            values,
            label: label.into(),
            claimed_class: None,
        })
    }

    /// Samples `f` at the nodes of `grid`.
    pub fn from_fn(grid: Grid, label: impl Into<String>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..grid.size()).map(|j| f(grid.node(j))).collect();
        Self::new(grid, values, label)
    }

    pub fn with_claimed_class(mut self, class: ClaimedClass) -> Self {
        self.claimed_class = Some(class);
        self
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn claimed_class(&self) -> Option<ClaimedClass> {
        self.claimed_class
    }

    /// Pointwise `self - other`; both must live on the same grid.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::LengthMismatch {
                expected: self.grid.size(),
                actual: other.grid.size(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(
            self.grid,
            values,
            format!("{} - {}", self.label, other.label),
        )
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| c * v).collect();
        Self::new(self.grid, values, format!("{c}*{}", self.label))
    }

    /// Circular shift by `s` grid steps: `g(x_j) = f(x_{j+s})`.
    pub fn rotate(&self, s: isize) -> Self {
        let n = self.values.len() as isize;
        let shift = s.rem_euclid(n) as usize;
        let mut values = self.values.clone();
        values.rotate_left(shift);
        Self {
            grid: self.grid,
            values,
            label: self.label.clone(),
            claimed_class: self.claimed_class,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// A computed L^p norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpNormValue {
    pub p: f64,
    pub value: f64,
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `((1/N) Σ |v_j|^p)^{1/p}` with fast paths for `p = 1` and `p = 2`.
pub(crate) fn discrete_lp(values: &[f64], p: f64) -> f64 {
    let n = values.len() as f64;
    if p == 1.0 {
        values.iter().map(|v| v.abs()).sum::<f64>() / n
    } else if p == 2.0 {
        (values.iter().map(|v| v * v).sum::<f64>() / n).sqrt()
    } else if p.is_infinite() {
        values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    } else {
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        // normalize first so |v|^p cannot overflow for large p
        let mean = values
            .iter()
            .map(|v| (v.abs() / scale).powf(p))
            .sum::<f64>()
            / n;
        scale * mean.powf(1.0 / p)
    }
}

/// Normalized L^p norm `((1/2π) ∫ |f|^p)^{1/p}` by the periodic rectangle rule.
pub fn lp_norm(f: &SampledPeriodicFunction, p: f64) -> Result<LpNormValue> {
    check_exponent(p)?;
    Ok(LpNormValue {
        p,
        value: discrete_lp(f.values(), p),
    })
}
