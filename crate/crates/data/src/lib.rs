//! Dataset ingestion, whitening, synthetic data, and artifact export for the
//! frequency-domain auto-encoder pipeline. Everything here works in double
//! precision and is deterministic for a fixed input and configuration.

pub mod checkpoint;
pub mod dataset;
pub mod error;
pub mod export;
pub mod metrics;
pub mod synth;
pub mod whiten;

pub use checkpoint::{
    load_checkpoint, load_stats, load_whitener, save_checkpoint, save_stats, save_whitener,
    Checkpoint,
};
pub use dataset::{load_dataset, load_image_file, Dataset};
pub use error::{DataError, Result};
pub use export::{
    export_filters, save_plane_pgm, save_side_by_side_pgm, save_tile_grid, write_dataset_pgm,
    FilterCrop, GridLayout,
};
pub use metrics::{export_metrics, format_float, Value};
pub use synth::{noise_band, synth_dataset, SynthKind, SynthSpec};
pub use whiten::{fit_whitener, whiten, whiten_one, WhitenConfig, WhitenMethod, Whitener};
