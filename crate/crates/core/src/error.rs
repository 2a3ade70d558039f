use std::io;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the function (ring index out of range, `u == v`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The model parameters are not usable for the requested quantity.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The operation applies only to a different regime (sub/supercritical).
    #[error("regime error: {0}")]
    Regime(String),

    /// A moment or tilt integral required by the operation does not exist.
    #[error("assumption violated: {0}")]
    Assumption(String),

    /// The kernel was evaluated on the diagonal.
    #[error("kernel singularity: {0}")]
    Singularity(String),

    /// The weight distribution does not support the requested operation.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A size-biased law was requested for a distribution with zero mean.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    /// Invalid experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
