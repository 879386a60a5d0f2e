use thiserror::Error;

use crate::symbol::ParseError;

pub type Result<T> = std::result::Result<T, QhaError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QhaError {
    /// A point lies outside the disk on which truncated formulas are trusted.
    #[error("|z| = {modulus} exceeds the trusted truncation radius {radius}")]
    RadiusExceeded { modulus: f64, radius: f64 },

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureOrderTooLow { estimate: f64, tolerance: f64 },

    #[error("sequence of length {len} is too short, need at least {min}")]
    SequenceTooShort { len: usize, min: usize },

    #[error("Poisson tail mass {tail:e} beyond index {len} exceeds {bound:e}")]
    TailTooHeavy { tail: f64, len: usize, bound: f64 },

    #[error("function is not absolutely integrable: {0}")]
    NotIntegrable(String),

    #[error("argument {x} outside the admissible range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },

    #[error("shift by {k} is too large for a sequence of length {len}")]
    ShiftTooLarge { k: usize, len: usize },

    #[error("symbol is not bounded: offending subtree `{subtree}`")]
    UnboundedSymbol { subtree: String },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
