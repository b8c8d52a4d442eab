use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: expected {expected}, found {found}")]
    GridMismatch { expected: String, found: String },

    #[error("spectral parameter z = {z} is inadmissible: {reason}")]
    InadmissibleSpectralParameter { z: Complex64, reason: String },

    #[error("spectral parameter z = {z} lies within {distance:.3e} of the spectrum")]
    SpectralProximity { z: Complex64, distance: f64 },

    #[error("iteration did not converge after {iterations} steps (last residual {:.3e})", residual_history.last().copied().unwrap_or(f64::NAN))]
    NotConverged {
        iterations: usize,
        residual_history: Vec<f64>,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("nonpositive value {value} at h = {h}")]
    NonPositiveValue { h: f64, value: f64 },

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error at {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn mismatch(expected: impl Into<String>, found: impl Into<String>) -> Self {
        Error::GridMismatch {
            expected: expected.into(),
            found: found.into(),
        }
    }
}
