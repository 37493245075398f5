//! CLI error taxonomy with a fixed exit-code mapping for scriptability:
//! 0 ok, 2 configuration, 3 data, 4 solver/numerics.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(#[from] rcae_data::DataError),

    #[error("solver error: {0}")]
    Solve(#[from] rcae_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) | CliError::Io(_) => 3,
            CliError::Solve(_) => 4,
        }
    }
}

impl From<rcae_bench::BenchError> for CliError {
    fn from(err: rcae_bench::BenchError) -> Self {
        match err {
            rcae_bench::BenchError::InvalidSpec(msg) => CliError::Config(msg),
            rcae_bench::BenchError::OverlappingSplits(src) => {
                CliError::Config(format!("train/eval splits overlap: {src}"))
            }
            rcae_bench::BenchError::StreamTooShort { needed, got } => {
                CliError::Config(format!("stream too short: need {needed}, got {got}"))
            }
            rcae_bench::BenchError::Core(e) => CliError::Solve(e),
            rcae_bench::BenchError::Data(e) => CliError::Data(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
