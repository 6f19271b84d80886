use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-invertible: the zero series has no inverse")]
    NonInvertible,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    /// An iterative method stopped without meeting its tolerance.
    /// `best` carries the last iterate.
    #[error("numerical failure after {iterations} iterations (residual {residual:e}): {what}")]
    NumericalFailure {
        what: &'static str,
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    #[error("|t| = {modulus} is outside the j-inversion regime (|t| >= {threshold})")]
    OutsideInversionRegime { modulus: f64, threshold: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the numerical methods rather than the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure { .. })
    }
}
