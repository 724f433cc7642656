//! Crate-wide error type and exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(
        "SPD factorization failed at pivot {pivot} (diag min {diag_min:.3e}, max {diag_max:.3e})"
    )]
    Factorization {
        pivot: usize,
        diag_min: f64,
        diag_max: f64,
    },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("non-finite loss at epoch {epoch}, batch {batch}: {value}")]
    NonFiniteLoss {
        epoch: usize,
        batch: usize,
        value: f64,
    },

    #[error("archive format error: {0}")]
    Archive(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 config, 3 model mismatch, 4 numerical failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Dimension(_) => 2,
            Error::ModelMismatch(_) | Error::Archive(_) => 3,
            Error::Factorization { .. } | Error::NonFiniteLoss { .. } => 4,
            Error::Io(_) => 1,
        }
    }
}
