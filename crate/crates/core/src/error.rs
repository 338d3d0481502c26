use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the completion toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, got {actual}")]
    DimensionMismatch { op: &'static str, expected: String, actual: String },

    #[error("singular value decomposition failed to converge")]
    ConvergenceFailure,

    #[error("truncation rank {rank} must be below min(I1, I2) = {limit}")]
    InvalidTruncation { rank: usize, limit: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("observation has no observed entries")]
    EmptyObservation,

    #[error("no frames found in {0}")]
    NoFrames(PathBuf),

    #[error("malformed {kind} file: {reason}")]
    Format { kind: &'static str, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dims_mismatch(
    op: &'static str,
    expected: impl std::fmt::Debug,
    actual: impl std::fmt::Debug,
) -> Error {
    Error::DimensionMismatch { op, expected: format!("{expected:?}"), actual: format!("{actual:?}") }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
