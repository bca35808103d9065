use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside its admissible (stationary/invertible) domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// A numerical routine failed (non positive-definite covariance, divergent series, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed or insufficient input data.
    #[error("input error: {0}")]
    Input(String),

    /// Two inputs that must agree in shape do not.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An ABC worker thread panicked; the records completed before the panic are kept.
    #[error("ABC worker panicked after {completed} records")]
    WorkerPanic { completed: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
