use thiserror::Error;

use crate::tunneling::Regime;

pub type Result<T, E = TrapError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrapError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature, eigen-iteration or difference scheme failed to reach
    /// its tolerance.
    #[error("numerical error: {message} (achieved error estimate {estimate:e})")]
    Numerical { message: String, estimate: f64 },

    #[error("quadratic coefficient b = {b:e} J is not positive: single-well regime")]
    SingleWell { b: f64 },

    #[error("quartic coefficient a = {a:e} J is not positive: potential is not confining")]
    Unconfined { a: f64 },

    #[error("degenerate geometry: |b2| = {b2:e} is too small to locate the transition")]
    DegenerateGeometry { b2: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("ambiguous: {0}")]
    Ambiguous(String),

    /// Inputs violate a documented contract (normalization, orthogonality).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no tunneling frequency in regime {0}")]
    NoFrequency(Regime),

    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl TrapError {
    pub(crate) fn numerical(message: impl Into<String>, estimate: f64) -> Self {
        TrapError::Numerical {
            message: message.into(),
            estimate,
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        TrapError::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for TrapError {
    fn from(e: std::io::Error) -> Self {
        TrapError::Io(e.to_string())
    }
}
