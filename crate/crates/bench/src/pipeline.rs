//! Shared pipeline parameter bundle used by every sweep.

use rcae_core::{
    ingest_batch, init_encoder, EncoderParams, ModelDims, SolverConfig, StatsMode,
    SufficientStats,
};
use rcae_data::Dataset;

use crate::error::{BenchError, Result};

/// Everything a sweep holds fixed: model shape, encoder sampling and the
/// solver configuration (whose `lambda` a λ-sweep overrides point by point).
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineParams {
    pub dims: ModelDims,
    pub encoder_seed: u64,
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub solver: SolverConfig<f64>,
}

impl PipelineParams {
    /// Small-machine default: 64×64 grayscale, 32 filters of side 8.
    pub fn desk_default() -> Self {
        Self {
            dims: ModelDims::new(64, 8, 1, 32).expect("static dims"),
            encoder_seed: 7,
            sigma_a: 0.1,
            sigma_b: 0.01,
            solver: SolverConfig::default(),
        }
    }

    pub fn encoder(&self) -> Result<EncoderParams<f64>> {
        Ok(init_encoder(
            self.dims,
            self.encoder_seed,
            self.sigma_a,
            self.sigma_b,
        )?)
    }

    /// Ingests a dataset into statistics matching the solver's mode.
    pub fn ingest(&self, ds: &Dataset, workers: usize) -> Result<SufficientStats<f64>> {
        let enc = self.encoder()?;
        self.check_dataset(ds)?;
        Ok(ingest_batch(ds.images(), &enc, self.stats_mode(), workers)?)
    }

    pub fn stats_mode(&self) -> StatsMode {
        self.solver.mode
    }

    fn check_dataset(&self, ds: &Dataset) -> Result<()> {
        if ds.image_side() != self.dims.image_side() || ds.channels() != self.dims.channels() {
            return Err(BenchError::InvalidSpec(format!(
                "dataset is {}×{} with {} channels but the model expects {}×{} with {}",
                ds.image_side(),
                ds.image_side(),
                ds.channels(),
                self.dims.image_side(),
                self.dims.image_side(),
                self.dims.channels()
            )));
        }
        Ok(())
    }

    /// Flat key/value view for run metadata and fixed-parameter diffing.
    pub fn describe(&self) -> Vec<(String, String)> {
        let rcae_core::BinPartition::RowBlocks { workers } = self.solver.bin_partition;
        vec![
            ("d".into(), self.dims.image_side().to_string()),
            ("w".into(), self.dims.filter_side().to_string()),
            ("c".into(), self.dims.channels().to_string()),
            ("k".into(), self.dims.filter_count().to_string()),
            ("encoder_seed".into(), self.encoder_seed.to_string()),
            ("sigma_a".into(), format!("{:e}", self.sigma_a)),
            ("sigma_b".into(), format!("{:e}", self.sigma_b)),
            ("lambda".into(), format!("{:e}", self.solver.lambda)),
            ("cycles".into(), self.solver.cycles.to_string()),
            ("eps_div".into(), format!("{:e}", self.solver.eps_div)),
            (
                "mode".into(),
                match self.solver.mode {
                    StatsMode::Literal => "literal".into(),
                    StatsMode::Exact => "exact".into(),
                },
            ),
            ("tol_stop".into(), format!("{:e}", self.solver.tol_stop)),
            ("workers".into(), workers.to_string()),
        ]
    }

    /// Same parameters with the model dimensions replaced.
    pub fn with_dims(&self, dims: ModelDims) -> Self {
        Self {
            dims,
            ..self.clone()
        }
    }
}
