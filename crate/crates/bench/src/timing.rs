//! CPU-time scaling sweeps: wall-clock of ingest + single-threaded solve as
//! one sweep variable grows, with a least-squares linearity report.

use std::time::Instant;

use rcae_core::{solve, BinPartition, ModelDims, SolverConfig};
use rcae_data::{synth_dataset, SynthKind, SynthSpec, Value};

use crate::error::{BenchError, Result};
use crate::fit::{linear_fit, LinearFit};
use crate::pipeline::PipelineParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    ImageSize,
    NumFilters,
    FilterSize,
    Lambda,
    TrainCount,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::ImageSize => "image_size",
            SweepVariable::NumFilters => "num_filters",
            SweepVariable::FilterSize => "filter_size",
            SweepVariable::Lambda => "lambda",
            SweepVariable::TrainCount => "train_count",
        }
    }

    pub fn is_timing(&self) -> bool {
        matches!(
            self,
            SweepVariable::ImageSize | SweepVariable::NumFilters | SweepVariable::FilterSize
        )
    }
}

/// Everything a timing sweep holds fixed at each grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingFixed {
    pub pipeline: PipelineParams,
    /// Synthetic images ingested per grid point.
    pub batch: usize,
    pub synth: SynthKind,
    pub data_seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<usize>,
    pub fixed: TimingFixed,
    pub repeats: usize,
    pub warmup: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.variable.is_timing() {
            return Err(BenchError::InvalidSpec(format!(
                "'{}' is not a timing variable",
                self.variable.name()
            )));
        }
        if self.grid.is_empty() {
            return Err(BenchError::InvalidSpec("empty grid".into()));
        }
        if !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(BenchError::InvalidSpec(
                "grid must be strictly increasing".into(),
            ));
        }
        if self.repeats < 3 {
            return Err(BenchError::InvalidSpec(
                "timing sweeps need repeats >= 3".into(),
            ));
        }
        if self.fixed.batch == 0 {
            return Err(BenchError::InvalidSpec("batch must be >= 1".into()));
        }
        Ok(())
    }

    fn dims_at(&self, value: usize) -> Result<ModelDims> {
        let base = self.fixed.pipeline.dims;
        let (d, w) = match self.variable {
            SweepVariable::ImageSize => (value, base.filter_side()),
            SweepVariable::FilterSize => (base.image_side(), value),
            _ => (base.image_side(), base.filter_side()),
        };
        let k = match self.variable {
            SweepVariable::NumFilters => value,
            _ => base.filter_count(),
        };
        ModelDims::new(d, w, base.channels(), k)
            .map_err(|e| BenchError::InvalidSpec(e.to_string()))
    }
}

/// One wall-clock measurement (milliseconds).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingSample {
    pub total_ms: f64,
    pub ingest_ms: f64,
    pub solve_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingPoint {
    pub value: usize,
    pub repeats: Vec<TimingSample>,
    pub median: TimingSample,
}

#[derive(Clone, Debug)]
pub struct TimingSweepReport {
    pub variable: SweepVariable,
    pub points: Vec<TimingPoint>,
    /// Median total time fitted against the sweep axis (pixel count for
    /// image size, K for filter count, w for filter side).
    pub fit: Option<LinearFit>,
    /// Filter-size sweeps also report the fit against w² (pixel count),
    /// since "linear in filter size" is ambiguous between the two.
    pub fit_secondary: Option<LinearFit>,
    /// Full fixed-parameter description per grid point, for metadata diffs.
    pub configs: Vec<Vec<(String, String)>>,
}

impl TimingSweepReport {
    /// CSV view: one row per repeat plus a median row per grid point.
    pub fn csv(&self) -> (Vec<&'static str>, Vec<Vec<Value>>) {
        let columns = vec![
            "sweep_var",
            "value",
            "cpu_ms",
            "ingest_ms",
            "solve_ms",
            "repeat",
        ];
        let mut rows = Vec::new();
        for point in &self.points {
            for (idx, sample) in point.repeats.iter().enumerate() {
                rows.push(vec![
                    Value::Text(self.variable.name().into()),
                    Value::Int(point.value as i64),
                    Value::Float(sample.total_ms),
                    Value::Float(sample.ingest_ms),
                    Value::Float(sample.solve_ms),
                    Value::Text(idx.to_string()),
                ]);
            }
            rows.push(vec![
                Value::Text(self.variable.name().into()),
                Value::Int(point.value as i64),
                Value::Float(point.median.total_ms),
                Value::Float(point.median.ingest_ms),
                Value::Float(point.median.solve_ms),
                Value::Text("median".into()),
            ]);
        }
        (columns, rows)
    }

    /// Human-readable block mirroring what the CSV carries.
    pub fn summary(&self) -> String {
        let mut out = format!("timing sweep over {}\n", self.variable.name());
        for point in &self.points {
            out.push_str(&format!(
                "  {} = {:>6}: median {:>10.3} ms (ingest {:.3} ms, solve {:.3} ms)\n",
                self.variable.name(),
                point.value,
                point.median.total_ms,
                point.median.ingest_ms,
                point.median.solve_ms
            ));
        }
        match &self.fit {
            Some(fit) => out.push_str(&format!(
                "  fit vs {}: slope {:.6} ms/unit, intercept {:.3} ms, r² = {:.4}\n",
                fit_axis_name(self.variable),
                fit.slope,
                fit.intercept,
                fit.r_squared
            )),
            None => out.push_str("  fit: degenerate (raw points only)\n"),
        }
        if let Some(fit) = &self.fit_secondary {
            out.push_str(&format!(
                "  fit vs filter pixel count w²: slope {:.6}, intercept {:.3}, r² = {:.4}\n",
                fit.slope, fit.intercept, fit.r_squared
            ));
        }
        out
    }
}

fn fit_axis_name(variable: SweepVariable) -> &'static str {
    match variable {
        SweepVariable::ImageSize => "pixel count d²",
        SweepVariable::NumFilters => "filter count K",
        SweepVariable::FilterSize => "filter side w",
        _ => "value",
    }
}

fn fit_x(variable: SweepVariable, value: usize) -> f64 {
    match variable {
        SweepVariable::ImageSize => (value * value) as f64,
        _ => value as f64,
    }
}

fn median_of(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Runs the sweep: per grid point, builds a fresh synthetic batch, ingests
/// statistics and solves (both single-threaded for timing comparability),
/// then records the median over `repeats` after `warmup` discarded rounds.
pub fn run_timing_sweep(spec: &SweepSpec) -> Result<TimingSweepReport> {
    spec.validate()?;
    let mut points = Vec::with_capacity(spec.grid.len());
    let mut configs = Vec::with_capacity(spec.grid.len());
    for &value in &spec.grid {
        let dims = spec.dims_at(value)?;
        let pipeline = spec.fixed.pipeline.with_dims(dims);
        let ds = synth_dataset(&SynthSpec {
            kind: spec.fixed.synth,
            n: spec.fixed.batch,
            d: dims.image_side(),
            c: dims.channels(),
            seed: spec.fixed.data_seed,
        })?;
        let enc = pipeline.encoder()?;
        let cfg = SolverConfig {
            bin_partition: BinPartition::RowBlocks { workers: 1 },
            ..pipeline.solver.clone()
        };

        let run_once = || -> Result<TimingSample> {
            let t0 = Instant::now();
            let stats =
                rcae_core::ingest_batch(ds.images(), &enc, pipeline.stats_mode(), 1)?;
            let ingest = t0.elapsed();
            let t1 = Instant::now();
            let _ = solve(&stats, &dims, &cfg)?;
            let solve_time = t1.elapsed();
            Ok(TimingSample {
                total_ms: (ingest + solve_time).as_secs_f64() * 1e3,
                ingest_ms: ingest.as_secs_f64() * 1e3,
                solve_ms: solve_time.as_secs_f64() * 1e3,
            })
        };

        for _ in 0..spec.warmup {
            run_once()?;
        }
        let repeats = (0..spec.repeats)
            .map(|_| run_once())
            .collect::<Result<Vec<_>>>()?;
        let median = TimingSample {
            total_ms: median_of(repeats.iter().map(|s| s.total_ms).collect()),
            ingest_ms: median_of(repeats.iter().map(|s| s.ingest_ms).collect()),
            solve_ms: median_of(repeats.iter().map(|s| s.solve_ms).collect()),
        };
        points.push(TimingPoint {
            value,
            repeats,
            median,
        });

        let mut config = pipeline.describe();
        config.push(("batch".into(), spec.fixed.batch.to_string()));
        config.push(("synth".into(), spec.fixed.synth.name().into()));
        config.push(("data_seed".into(), spec.fixed.data_seed.to_string()));
        configs.push(config);
    }

    let primary: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (fit_x(spec.variable, p.value), p.median.total_ms))
        .collect();
    let fit = linear_fit(&primary);
    let fit_secondary = if spec.variable == SweepVariable::FilterSize {
        let sq: Vec<(f64, f64)> = points
            .iter()
            .map(|p| ((p.value * p.value) as f64, p.median.total_ms))
            .collect();
        linear_fit(&sq)
    } else {
        None
    };

    Ok(TimingSweepReport {
        variable: spec.variable,
        points,
        fit,
        fit_secondary,
        configs,
    })
}

/// Wall-clock of the same solve at several worker counts, as (workers,
/// solve_ms) medians. An artifact-level scaling table, separate from the
/// single-threaded sweeps above.
pub fn measure_speedup(
    fixed: &TimingFixed,
    workers_grid: &[usize],
    repeats: usize,
) -> Result<Vec<(usize, f64)>> {
    let pipeline = &fixed.pipeline;
    let dims = pipeline.dims;
    let ds = synth_dataset(&SynthSpec {
        kind: fixed.synth,
        n: fixed.batch,
        d: dims.image_side(),
        c: dims.channels(),
        seed: fixed.data_seed,
    })?;
    let stats = pipeline.ingest(&ds, 1)?;
    let mut rows = Vec::new();
    for &workers in workers_grid {
        let cfg = SolverConfig {
            bin_partition: BinPartition::RowBlocks { workers },
            ..pipeline.solver.clone()
        };
        let times: Vec<f64> = (0..repeats.max(1))
            .map(|_| {
                let t = Instant::now();
                let _ = solve(&stats, &dims, &cfg)?;
                Ok(t.elapsed().as_secs_f64() * 1e3)
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((workers, median_of(times)));
    }
    Ok(rows)
}
