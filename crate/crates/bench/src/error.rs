//! Error type for the sweep harness.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),

    #[error("training and evaluation splits come from the same source '{0}'")]
    OverlappingSplits(String),

    #[error("stream of {got} images is too short (need at least {needed})")]
    StreamTooShort { needed: usize, got: usize },

    #[error(transparent)]
    Core(#[from] rcae_core::Error),

    #[error(transparent)]
    Data(#[from] rcae_data::DataError),
}

pub type Result<T> = std::result::Result<T, BenchError>;
