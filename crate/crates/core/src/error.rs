use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SirError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SirError {
    #[error("image dimensions must be non-zero, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },

    #[error("expected {expected} samples for the given dimensions, got {actual}")]
    DataLength { expected: usize, actual: usize },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported image format for {path}: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },

    #[error("failed to read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: ::image::ImageError,
    },

    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: ::image::ImageError,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Manifest(String),
}

impl SirError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        SirError::InvalidParameter(msg.into())
    }
}
