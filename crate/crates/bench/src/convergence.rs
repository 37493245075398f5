//! Filter-convergence curve: how much the learned spatial filters still move
//! as more training images stream in.

use rcae_core::{absorb, lift_sample, solve, RealPlane, SufficientStats};
use rcae_data::{Dataset, Value};

use crate::error::{BenchError, Result};
use crate::pipeline::PipelineParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergencePoint {
    pub n_seen: usize,
    /// Mean over filters and entries of the squared difference between the
    /// spatial filters of consecutive re-solves.
    pub avg_sq_diff: f64,
    /// Trailing moving average of `avg_sq_diff`.
    pub smoothed: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub points: Vec<ConvergencePoint>,
    pub peak: f64,
    pub final_value: f64,
    /// `final_value / peak`; small when the filters have settled.
    pub settle_ratio: f64,
}

impl ConvergenceReport {
    pub fn csv(&self) -> (Vec<&'static str>, Vec<Vec<Value>>) {
        let rows = self
            .points
            .iter()
            .map(|p| {
                vec![
                    Value::Int(p.n_seen as i64),
                    Value::Float(p.avg_sq_diff),
                    Value::Float(p.smoothed),
                ]
            })
            .collect();
        (vec!["n_seen", "avg_sq_diff", "smoothed"], rows)
    }

    pub fn summary_text(&self) -> String {
        format!(
            "convergence curve: peak {:.6e}, final {:.6e}, settle ratio {:.4}\n",
            self.peak, self.final_value, self.settle_ratio
        )
    }
}

/// Streams the dataset in blocks of `checkpoint_every` images; after each
/// block, re-solves from zero initialization with the accumulated statistics
/// and records how far the spatial filters moved since the previous solve
/// (the first solve is compared against the zero filters). A trailing moving
/// average over `smooth_window` points mirrors the raw curve.
pub fn run_convergence_curve(
    stream: &Dataset,
    checkpoint_every: usize,
    pipeline: &PipelineParams,
    smooth_window: usize,
) -> Result<ConvergenceReport> {
    if checkpoint_every == 0 {
        return Err(BenchError::InvalidSpec("checkpoint_every must be >= 1".into()));
    }
    if stream.len() < 2 * checkpoint_every {
        return Err(BenchError::StreamTooShort {
            needed: 2 * checkpoint_every,
            got: stream.len(),
        });
    }
    let window = smooth_window.max(1);
    let dims = pipeline.dims;
    let enc = pipeline.encoder()?;
    let d = dims.image_side();

    let mut stats = SufficientStats::empty(dims.filter_count(), d, pipeline.stats_mode());
    let mut previous: Vec<RealPlane<f64>> = (0..dims.filter_count())
        .map(|_| RealPlane::zeros(d, d))
        .collect();
    let mut raw = Vec::new();
    let mut points = Vec::new();

    // Trailing partial blocks are dropped so every point aggregates the same
    // number of fresh images.
    for chunk in stream.images().chunks(checkpoint_every) {
        if chunk.len() < checkpoint_every {
            break;
        }
        for img in chunk {
            stats = absorb(stats, lift_sample(img, &enc)?)?;
        }
        let (dec, _) = solve(&stats, &dims, &pipeline.solver)?;
        let spatial = dec.spatial()?;

        let mut sum = 0.0;
        for (new, old) in spatial.iter().zip(&previous) {
            for (a, b) in new.as_slice().iter().zip(old.as_slice()) {
                let diff = a - b;
                sum += diff * diff;
            }
        }
        let avg = sum / (dims.filter_count() * d * d) as f64;
        raw.push(avg);
        let tail = &raw[raw.len().saturating_sub(window)..];
        points.push(ConvergencePoint {
            n_seen: stats.n_seen(),
            avg_sq_diff: avg,
            smoothed: tail.iter().sum::<f64>() / tail.len() as f64,
        });
        previous = spatial;
    }

    let peak = raw.iter().copied().fold(0.0, f64::max);
    let final_value = *raw.last().expect("at least two checkpoints");
    Ok(ConvergenceReport {
        points,
        peak,
        final_value,
        settle_ratio: if peak > 0.0 { final_value / peak } else { 0.0 },
    })
}
