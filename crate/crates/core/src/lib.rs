//! Numerical toolkit for trigonometric approximation by summability means.
//!
//! Periodic functions live on uniform grids over `[0, 2π)`. Fourier
//! coefficients, partial sums and matrix means are computed from samples;
//! sequence-class tests, moduli of continuity and convergence-rate
//! diagnostics build on top.

// `!(a <= b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod cli;
pub mod error;
pub mod fourier;
pub mod modulus;
pub mod periodic;
pub mod rates;
pub mod regression;
pub mod summability;
pub mod zoo;

pub use error::{Error, Result};

/// Scientific notation with 17 significant digits, enough to round-trip an `f64`.
pub(crate) fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
