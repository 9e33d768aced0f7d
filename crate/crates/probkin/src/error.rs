//! Error type shared by all library modules.

use thiserror::Error;

/// Library-wide error enum.
///
/// Variants carry the measured defect where one exists, so diagnostics can
/// report how far an input was from satisfying its contract.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |a - a^dag| = {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary: max |u u^dag - 1| = {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    WrongDimension {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("ODE right-hand side returned a non-finite derivative at t = {t}")]
    NonFiniteDerivative { t: f64 },

    #[error("ODE step must be positive, got {step}")]
    NonPositiveStep { step: f64 },

    #[error("ODE end time {t1} precedes start time {t0}")]
    ReversedTimeSpan { t0: f64, t1: f64 },

    #[error("probability component {value} outside [0, 1]")]
    OutOfRangeProbability { value: f64 },

    #[error("not a valid density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },

    #[error("marginal is not a probability distribution: {reason}")]
    InvalidMarginal { reason: String },

    #[error("state is not quantum-admissible: quantumness_defect = {defect}")]
    NonAdmissibleState { defect: f64 },

    #[error("Kraus set must contain at least one operator")]
    EmptySet,

    #[error("invalid Kraus set: completeness defect {defect:.3e} exceeds tolerance")]
    InvalidKrausSet { defect: f64 },

    #[error("mixed-unitary weights must sum to 1, got {sum}")]
    WeightsNotNormalized { sum: f64 },

    #[error("diagonal probabilities sum to {sum}, exceeding 1")]
    DiagonalOverflow { sum: f64 },

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("position argument {value} outside the supported range |x| <= {max}")]
    RangeExceeded { value: f64, max: f64 },

    #[error("config does not match the schema:\n{}", violations.join("\n"))]
    Schema { violations: Vec<String> },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
