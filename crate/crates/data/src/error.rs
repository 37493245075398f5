//! Error type for dataset ingestion and artifact export.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {0}")]
    UnreadablePath(PathBuf),

    #[error("failed to decode {path}: {reason}")]
    DecodeFailure { path: PathBuf, reason: String },

    #[error("no decodable images found under {0}")]
    NoImages(PathBuf),

    #[error("{path}: source image {source_dims:?} is smaller than the {target}×{target} target")]
    DimUnderflow {
        path: PathBuf,
        source_dims: (usize, usize),
        target: usize,
    },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("metric row has {found} values but the header has {expected} columns")]
    ColumnMismatch { expected: usize, found: usize },

    #[error("malformed container file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] rcae_core::Error),
}

pub type Result<T> = std::result::Result<T, DataError>;
