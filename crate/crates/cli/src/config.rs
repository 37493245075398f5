//! Run configuration: one human-readable TOML file covering the full
//! pipeline, with documented defaults, strict unknown-key rejection and
//! lossless round-tripping.

use serde::{Deserialize, Serialize};

use rcae_core::{BinPartition, ModelDims, SolverConfig, StatsMode};
use rcae_data::{WhitenConfig, WhitenMethod};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    /// Image side in pixels.
    pub d: usize,
    /// Filter side in pixels.
    pub w: usize,
    /// Channel count (1 = grayscale).
    pub c: usize,
    /// Number of filters.
    pub k: usize,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            d: 64,
            w: 8,
            c: 1,
            k: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EncoderSection {
    /// Seed for the frozen random encoder.
    pub seed: u64,
    /// Standard deviation of the encoding-filter entries.
    pub sigma_a: f64,
    /// Standard deviation of the encoding-bias entries.
    pub sigma_b: f64,
}

impl Default for EncoderSection {
    fn default() -> Self {
        Self {
            seed: 7,
            sigma_a: 0.1,
            sigma_b: 0.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WhitenSection {
    /// "spectral", "standardize" or "none".
    pub method: String,
    /// Spectral regularizer, relative to the mean amplitude level.
    pub reg: f64,
}

impl Default for WhitenSection {
    fn default() -> Self {
        Self {
            method: "spectral".into(),
            reg: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    /// Regularization weight λ.
    pub lambda: f64,
    /// "literal" (update rule on summed statistics) or "exact".
    pub mode: String,
    /// Coordinate-descent cycles per solve.
    pub cycles: usize,
    /// Denominator guard.
    pub eps_div: f64,
    /// Early-stop threshold on per-bin max squared filter change (0 = off).
    pub tol_stop: f64,
    /// Solver/ingestion worker count; 0 means machine parallelism.
    pub threads: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            mode: "exact".into(),
            cycles: 3,
            eps_div: 1e-12,
            tol_stop: 0.0,
            threads: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InferSection {
    /// "matrix" (literal matrix transpose) or "rot180".
    pub transpose: String,
    /// "cropped" (w×w window, h×h maps) or "full" (d×d filters).
    pub support: String,
}

impl Default for InferSection {
    fn default() -> Self {
        Self {
            transpose: "matrix".into(),
            support: "cropped".into(),
        }
    }
}

/// Full pipeline configuration. Every field has a default; see the README
/// for a commented example file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelSection,
    pub encoder: EncoderSection,
    pub whiten: WhitenSection,
    pub solver: SolverSection,
    pub infer: InferSection,
}

/// Canonical configurations selectable with a single flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Reference-scale run: 244×244 grayscale, 300 filters, λ = 16.5,
    /// literal update rule with a single CD cycle.
    Paper,
    /// Small-machine run: 64×64, 32 filters of side 8, exact mode.
    Desk,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            other => Err(CliError::Config(format!("unknown preset '{other}'"))),
        }
    }

    pub fn config(&self) -> RunConfig {
        match self {
            Preset::Paper => RunConfig {
                model: ModelSection {
                    d: 244,
                    w: 11,
                    c: 1,
                    k: 300,
                },
                encoder: EncoderSection::default(),
                whiten: WhitenSection::default(),
                solver: SolverSection {
                    lambda: 16.5,
                    mode: "literal".into(),
                    cycles: 1,
                    ..SolverSection::default()
                },
                infer: InferSection::default(),
            },
            Preset::Desk => RunConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config parse error: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn dims(&self) -> Result<ModelDims> {
        ModelDims::new(self.model.d, self.model.w, self.model.c, self.model.k)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn stats_mode(&self) -> Result<StatsMode> {
        match self.solver.mode.as_str() {
            "literal" => Ok(StatsMode::Literal),
            "exact" => Ok(StatsMode::Exact),
            other => Err(CliError::Config(format!("unknown solver mode '{other}'"))),
        }
    }

    /// Worker count: explicit or machine parallelism when 0.
    pub fn threads(&self) -> usize {
        if self.solver.threads == 0 {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        } else {
            self.solver.threads
        }
    }

    pub fn solver_config(&self) -> Result<SolverConfig<f64>> {
        let cfg = SolverConfig {
            lambda: self.solver.lambda,
            cycles: self.solver.cycles,
            eps_div: self.solver.eps_div,
            mode: self.stats_mode()?,
            bin_partition: BinPartition::RowBlocks {
                workers: self.threads(),
            },
            tol_stop: self.solver.tol_stop,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn whiten_config(&self) -> Result<WhitenConfig> {
        Ok(WhitenConfig {
            method: WhitenMethod::parse(&self.whiten.method)
                .map_err(|e| CliError::Config(e.to_string()))?,
            reg: self.whiten.reg,
        })
    }

    pub fn infer_options(&self) -> Result<rcae_core::InferOptions> {
        let transpose = match self.infer.transpose.as_str() {
            "matrix" => rcae_core::TransposeMode::MatrixTranspose,
            "rot180" => rcae_core::TransposeMode::Rot180,
            other => {
                return Err(CliError::Config(format!(
                    "unknown transpose mode '{other}'"
                )))
            }
        };
        let support = match self.infer.support.as_str() {
            "cropped" => rcae_core::FilterSupport::Cropped(self.model.w),
            "full" => rcae_core::FilterSupport::Full,
            other => return Err(CliError::Config(format!("unknown support '{other}'"))),
        };
        Ok(rcae_core::InferOptions {
            activation_is_linear: false,
            transpose,
            support,
        })
    }

    /// Full validation without running anything.
    pub fn validate(&self) -> Result<()> {
        self.dims()?;
        self.solver_config()?;
        self.whiten_config()?;
        self.infer_options()?;
        if !(self.encoder.sigma_a > 0.0) || !(self.encoder.sigma_b > 0.0) {
            return Err(CliError::Config("sigma_a and sigma_b must be > 0".into()));
        }
        Ok(())
    }
}
