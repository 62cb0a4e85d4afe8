//! The summability kernel `K_n(u) = Σ_k a_{n,k} sin((k+½)u) / (2 sin(u/2))`
//! and its L¹ mass split at `π/n`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::periodic::SampledPeriodicFunction;

use super::SummabilityRow;

/// Convergence threshold on successive refinements of the kernel integrals.
pub const KERNEL_TOLERANCE: f64 = 1e-6;

const MIN_QUAD_POINTS: usize = 64;
const MAX_CELLS: usize = 1 << 20;

// 8-point Gauss–Legendre rule on [-1, 1]
const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `Σ_k a_{n,k} sin((k+½)u)`, by complex Horner on `e^{iu}`.
fn numerator(weights: &[f64], u: f64) -> f64 {
    if u < 1e-3 {
        return weights
            .iter()
            .enumerate()
            .map(|(k, a)| a * ((k as f64 + 0.5) * u).sin())
            .sum();
    }
    let (zs, zc) = u.sin_cos();
    let (mut re, mut im) = (0.0, 0.0);
    for &a in weights.iter().rev() {
        let next_re = re * zc - im * zs + a;
        let next_im = re * zs + im * zc;
        re = next_re;
        im = next_im;
    }
    let (hs, hc) = (0.5 * u).sin_cos();
    re * hs + im * hc
}

fn eval_unchecked(weights: &[f64], u: f64) -> f64 {
    if u == 0.0 {
        return weights
            .iter()
            .enumerate()
            .map(|(k, a)| a * (k as f64 + 0.5))
            .sum();
    }
    numerator(weights, u) / (2.0 * (0.5 * u).sin())
}

/// `K_n(u)` for `u ∈ [0, π]`; `u = 0` yields the limit `Σ a_{n,k}(k + ½)`.
pub fn kernel_eval(row: &SummabilityRow, u: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&u) {
        return Err(Error::OutOfRange(format!(
            "kernel argument u = {u} outside [0, π]"
        )));
    }
    Ok(eval_unchecked(row.weights(), u))
}

fn gauss_legendre(weights: &[f64], a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc += w
            * (eval_unchecked(weights, mid - half * x).abs()
                + eval_unchecked(weights, mid + half * x).abs());
    }
    acc * half
}

/// Root of `K_n` in `(a, b)` given a sign change, by the Illinois method.
fn bracketed_root(weights: &[f64], mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    let mut side = 0i8;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) || (b - a) <= 1e-15 * b.abs().max(1.0) {
            return 0.5 * (a + b);
        }
        let fc = eval_unchecked(weights, c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// `∫_a^b |K_n(u)| du` on `cells` uniform cells, each split at a bracketed
/// sign change so the rule only ever sees smooth pieces.
fn abs_integral_on_cells(weights: &[f64], a: f64, b: f64, cells: usize) -> f64 {
    let h = (b - a) / cells as f64;
    let mut left = a;
    let mut f_left = eval_unchecked(weights, left);
    let mut total = 0.0;
    for i in 1..=cells {
        let right = if i == cells { b } else { a + i as f64 * h };
        let f_right = eval_unchecked(weights, right);
        if f_left != 0.0 && f_right != 0.0 && (f_left > 0.0) != (f_right > 0.0) {
            let root = bracketed_root(weights, left, f_left, right, f_right);
            total += gauss_legendre(weights, left, root) + gauss_legendre(weights, root, right);
        } else {
            total += gauss_legendre(weights, left, right);
        }
        left = right;
        f_left = f_right;
    }
    total
}

/// Refines by doubling the cell count until two estimates differ by less
/// than [`KERNEL_TOLERANCE`].
fn abs_integral(weights: &[f64], a: f64, b: f64, start_cells: usize) -> f64 {
    let mut cells = start_cells;
    let mut previous = abs_integral_on_cells(weights, a, b, cells);
    while cells < MAX_CELLS {
        cells *= 2;
        let current = abs_integral_on_cells(weights, a, b, cells);
        if (current - previous).abs() < KERNEL_TOLERANCE {
            return current;
        }
        previous = current;
    }
    previous
}

/// Kernel L¹ mass on `[0, π/n]` and `[π/n, π]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KernelSplit {
    pub n: usize,
    pub near: f64,
    pub far: f64,
}

impl KernelSplit {
    pub fn total(&self) -> f64 {
        self.near + self.far
    }
}

/// `I1 = ∫_0^{π/n} |K_n|` and `I2 = ∫_{π/n}^{π} |K_n|`.
///
/// `quad_points` is the initial number of cells per interval.
pub fn kernel_l1_split(row: &SummabilityRow, quad_points: usize) -> Result<KernelSplit> {
    if row.n() < 1 {
        return Err(Error::OutOfRange("kernel split needs n >= 1".into()));
    }
    if quad_points < MIN_QUAD_POINTS {
        return Err(Error::OutOfRange(format!(
            "quad_points = {quad_points} (need at least {MIN_QUAD_POINTS})"
        )));
    }
    let cut = PI / row.n() as f64;
    let w = row.weights();
    Ok(KernelSplit {
        n: row.n(),
        near: abs_integral(w, 0.0, cut, quad_points),
        far: abs_integral(w, cut, PI, quad_points),
    })
}

/// `(1/π) ∫_0^{2π} f(x+u) K_n(u) du` evaluated by the rectangle rule on
/// `f`'s grid, with `K_n` extended evenly to `[π, 2π)`.
///
/// Exact for trigonometric polynomials `f` whose degree plus `n` stays
/// below the grid size.
pub fn kernel_smooth(
    f: &SampledPeriodicFunction,
    row: &SummabilityRow,
) -> Result<SampledPeriodicFunction> {
    let grid = f.grid();
    let size = grid.size();
    let kernel: Vec<f64> = (0..size)
        .map(|j| {
            let m = j.min(size - j);
            eval_unchecked(row.weights(), grid.node(m))
        })
        .collect();
    let values = f.values();
    let scale = grid.spacing() / PI;
    let out = (0..size)
        .map(|i| {
            scale
                * kernel
                    .iter()
                    .enumerate()
                    .map(|(j, k)| values[(i + j) % size] * k)
                    .sum::<f64>()
        })
        .collect();
    SampledPeriodicFunction::new(grid, out, format!("K_{} * {}", row.n(), f.label()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summability::{make_family, FamilyKind};

    fn row(s: &str, n: usize) -> SummabilityRow {
        make_family(FamilyKind::parse(s).unwrap())
            .unwrap()
            .row(n)
            .unwrap()
    }

    #[test]
    fn gauss_legendre_is_exact_for_degree_15() {
        // ∫_0^1 x^15 = 1/16 through a fake "kernel" is awkward; check the rule directly
        let mid = 0.5;
        let half = 0.5;
        let mut acc = 0.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            acc += w * ((mid - half * x).powi(15) + (mid + half * x).powi(15));
        }
        assert!((acc * half - 1.0 / 16.0).abs() < 1e-15);
        assert!((GL_WEIGHTS.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn limit_at_zero() {
        let k = kernel_eval(&row("cesaro", 1), 0.0).unwrap();
        assert!((k - 1.0).abs() < 1e-15);
        // continuity into the limit
        let r = row("norlund(k+1)", 40);
        let k0 = kernel_eval(&r, 0.0).unwrap();
        let k1 = kernel_eval(&r, 1e-7).unwrap();
        assert!((k0 - k1).abs() < 1e-6 * k0);
    }

    #[test]
    fn identity_row_is_dirichlet() {
        for n in [1, 5, 64] {
            let r = row("identity", n);
            for u in [1e-4, 0.01, 0.3, 1.0, 2.5, PI] {
                let k = kernel_eval(&r, u).unwrap();
                let d = ((n as f64 + 0.5) * u).sin() / (2.0 * (u / 2.0).sin());
                assert!((k - d).abs() < 1e-10 * d.abs().max(1.0), "n={n} u={u}");
            }
        }
    }

    #[test]
    fn value_at_pi_alternates() {
        for s in ["cesaro", "norlund(k+1)", "norlund(2^k)"] {
            let r = row(s, 9);
            let alt: f64 = r
                .weights()
                .iter()
                .enumerate()
                .map(|(k, a)| if k % 2 == 0 { *a } else { -*a })
                .sum();
            assert!((kernel_eval(&r, PI).unwrap() - 0.5 * alt).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_out_of_range_argument() {
        let r = row("cesaro", 3);
        assert!(kernel_eval(&r, -0.1).is_err());
        assert!(kernel_eval(&r, 3.2).is_err());
    }

    #[test]
    fn cesaro_one_split_matches_closed_form() {
        // K_1 = (1 + cos u)/2, so I1 + I2 = π/2
        let split = kernel_l1_split(&row("cesaro", 1), 64).unwrap();
        assert!((split.total() - PI / 2.0).abs() < 1e-9);
        let fine = kernel_l1_split(&row("cesaro", 1), 128).unwrap();
        assert!((split.total() - fine.total()).abs() < 1e-6);
    }

    #[test]
    fn dirichlet_one_matches_lebesgue_constant() {
        // D_1 = 1/2 + cos u; ∫_0^π |D_1| = π/6 + √3
        let split = kernel_l1_split(&row("identity", 1), 64).unwrap();
        assert!((split.total() - (PI / 6.0 + 3f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn fejer_mass_is_constant() {
        // Fejér kernels are nonnegative with ∫_0^π K = π/2
        for n in [4, 33, 200] {
            let split = kernel_l1_split(&row("cesaro", n), 64).unwrap();
            assert!((split.total() - PI / 2.0).abs() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn split_preconditions() {
        assert!(kernel_l1_split(&row("cesaro", 0), 64).is_err());
        assert!(kernel_l1_split(&row("cesaro", 4), 63).is_err());
    }
}
