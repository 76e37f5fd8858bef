use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function has a pole at {0}")]
    Pole(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    SeriesNonConvergence { terms: usize, last_term: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid layer spec: {0}")]
    InvalidLayers(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("caputo weights do not match the problem: {0}")]
    WeightsMismatch(String),

    #[error("non-finite training loss at epoch {epoch} (loss = {loss})")]
    NonFiniteLoss { epoch: usize, loss: f64 },

    #[error("fixed-point iteration did not converge at step {step} after {iterations} iterations")]
    FixedPointNonConvergence { step: usize, iterations: usize },

    #[error("unknown model `{0}` (expected one of: exp, logistic, harvest)")]
    UnknownModel(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
