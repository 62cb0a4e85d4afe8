use thiserror::Error;

/// Errors raised by the numerical operations of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid too coarse: {0} nodes (need at least 8)")]
    GridTooCoarse(usize),

    #[error(
        "grid too small: N = {grid} but at least {required} nodes are needed for degree {degree}"
    )]
    GridTooSmall {
        grid: usize,
        required: usize,
        degree: usize,
    },

    #[error("exponent p = {0} is invalid (need p >= 1)")]
    InvalidExponent(f64),

    #[error("degree {degree} exceeds the available harmonics (max {max})")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("Nörlund weight p_{index} = {value} is not positive")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("row {0} is not available in this family")]
    RowUnavailable(usize),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("too few points for a fit: {got} (need {need})")]
    TooFewPoints { got: usize, need: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
