//! End-to-end training: load, whiten, ingest, solve, persist.

use std::path::{Path, PathBuf};

use rcae_core::{ingest_batch, init_encoder, loss_spatial, solve};
use rcae_data::{
    fit_whitener, load_dataset, save_checkpoint, save_stats, save_whitener, synth_dataset,
    whiten, Checkpoint, Dataset, SynthKind, SynthSpec,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::meta::{sidecar, RunMetadata};

/// Where training images come from.
#[derive(Clone, Debug)]
pub enum DataInput {
    Dir(PathBuf),
    Synth { kind: SynthKind, n: usize, seed: u64 },
}

impl DataInput {
    pub fn describe(&self) -> String {
        match self {
            DataInput::Dir(p) => format!("dir:{}", p.display()),
            DataInput::Synth { kind, n, seed } => {
                format!("synth:{}:n={n},seed={seed}", kind.name())
            }
        }
    }

    pub fn load(&self, cfg: &RunConfig, limit: Option<usize>) -> Result<Dataset> {
        match self {
            DataInput::Dir(path) => {
                Ok(load_dataset(path, cfg.model.d, cfg.model.c, limit)?)
            }
            DataInput::Synth { kind, n, seed } => {
                let n = limit.map_or(*n, |l| l.min(*n));
                Ok(synth_dataset(&SynthSpec {
                    kind: *kind,
                    n,
                    d: cfg.model.d,
                    c: cfg.model.c,
                    seed: *seed,
                })?)
            }
        }
    }
}

/// Parses `kind:count:seed`, e.g. `bandlimited-noise:400:11`.
pub fn parse_synth_arg(arg: &str) -> Result<DataInput> {
    let parts: Vec<&str> = arg.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "--synth expects kind:count:seed, got '{arg}'"
        )));
    }
    let kind = SynthKind::parse(parts[0]).map_err(|e| CliError::Config(e.to_string()))?;
    let n = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("bad count '{}'", parts[1])))?;
    let seed = parts[2]
        .parse()
        .map_err(|_| CliError::Config(format!("bad seed '{}'", parts[2])))?;
    Ok(DataInput::Synth { kind, n, seed })
}

pub fn run_train(
    cfg: &RunConfig,
    input: &DataInput,
    out: &Path,
    limit: Option<usize>,
    stats_out: Option<&Path>,
) -> Result<()> {
    cfg.validate()?;
    let dims = cfg.dims()?;
    let solver_cfg = cfg.solver_config()?;
    let threads = cfg.threads();

    let raw = input.load(cfg, limit)?;
    let whitener = fit_whitener(&raw, &cfg.whiten_config()?)?;
    let train = whiten(&raw, &whitener)?;
    println!(
        "loaded {} images ({}×{}, {} channel(s)) from {}",
        train.len(),
        dims.image_side(),
        dims.image_side(),
        dims.channels(),
        input.describe()
    );

    let enc = init_encoder(dims, cfg.encoder.seed, cfg.encoder.sigma_a, cfg.encoder.sigma_b)?;
    let stats = ingest_batch(train.images(), &enc, solver_cfg.mode, threads)?;
    let (filters, report) = solve(&stats, &dims, &solver_cfg)?;
    println!(
        "solved {} bins × {} filters in {:.3} ms ({} cycle(s), final max |ΔW|² = {:.3e})",
        report.bins_solved,
        dims.filter_count(),
        report.solve_time.as_secs_f64() * 1e3,
        report.cycles_run,
        report.per_cycle_max_sq_change.last().copied().unwrap_or(0.0)
    );

    let ckpt = Checkpoint {
        dims,
        seed: cfg.encoder.seed,
        sigma_a: cfg.encoder.sigma_a,
        sigma_b: cfg.encoder.sigma_b,
        lambda: cfg.solver.lambda,
        filters,
    };
    save_checkpoint(&ckpt, out)?;
    let whitener_path = sidecar(out, "whiten");
    save_whitener(&whitener, &whitener_path)?;
    if let Some(stats_path) = stats_out {
        save_stats(&stats, &dims, stats_path)?;
        println!("statistics snapshot written to {}", stats_path.display());
    }

    let loss = loss_spatial(train.images(), &enc, &ckpt.filters, cfg.solver.lambda)?;
    println!(
        "train loss over {} images: recon {:.6e} + {} × contractive {:.6e} = total {:.6e}",
        loss.n, loss.recon, loss.lambda, loss.contractive, loss.total
    );

    let meta_path = sidecar(out, "meta.json");
    RunMetadata::new("train", cfg)
        .input("data", input.describe())
        .input("limit", limit.map_or("none".into(), |l| l.to_string()))
        .output("checkpoint", out.display())
        .output("whitener", whitener_path.display())
        .write(&meta_path)?;
    println!("checkpoint written to {}", out.display());
    Ok(())
}
