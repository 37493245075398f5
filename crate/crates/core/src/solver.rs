//! Coordinate-descent solver over decoding filters, independent per frequency bin.
//!
//! The spectral objective decouples into `d²` independent K-dimensional
//! regularized complex least-squares problems, one per bin. Each bin runs
//! cyclic coordinate descent `k = 0..K`; the per-coordinate minimizer is a
//! closed-form ratio. Two update rules ship:
//!
//! - literal: the ratio evaluated on the summed statistics `H_N, X_N, D_N`,
//!   i.e. products of sums. This is the exact minimizer only for `N = 1`.
//! - exact: the true per-coordinate minimizer of the sample-averaged
//!   objective, which needs the retained per-sample spectra.
//!
//! Bins never read or write each other, so any partition of the grid across
//! workers yields bitwise-identical filters.

use std::time::{Duration, Instant};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::{DecoderFilters, ModelDims};
use crate::plane::ComplexPlane;
use crate::scalar::Scalar;
use crate::spectral::hadamard_div;
use crate::stats::{SpectralSample, StatsMode, SufficientStats};

/// Solver knobs. `lambda` is the single tunable optimization parameter;
/// everything else is engineering.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<F> {
    /// Contractive regularization weight, `>= 0`.
    pub lambda: F,
    /// Full CD cycles through the filter coordinates, `>= 1`.
    pub cycles: usize,
    /// Real guard added to every update denominator, `>= 0`.
    pub eps_div: F,
    /// Which update rule drives the solve.
    pub mode: StatsMode,
    /// How frequency bins are split across workers.
    pub bin_partition: BinPartition,
    /// Early stop once a bin's max squared filter change over a cycle drops
    /// to this value or below; `0` disables.
    pub tol_stop: F,
}

impl<F: Scalar> Default for SolverConfig<F> {
    fn default() -> Self {
        Self {
            lambda: F::one(),
            cycles: 1,
            eps_div: F::from_f64(1e-12).unwrap(),
            mode: StatsMode::Exact,
            bin_partition: BinPartition::default(),
            tol_stop: F::zero(),
        }
    }
}

impl<F: Scalar> SolverConfig<F> {
    /// The naive single-cycle configuration used for the reference pipeline:
    /// literal update rule, one cycle, zero-initialized filters.
    pub fn naive_literal(lambda: F) -> Self {
        Self {
            lambda,
            cycles: 1,
            mode: StatsMode::Literal,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= F::zero()) {
            return Err(Error::InvalidConfig("lambda must be >= 0".into()));
        }
        if self.cycles == 0 {
            return Err(Error::InvalidConfig("cycles must be >= 1".into()));
        }
        if !(self.eps_div >= F::zero()) {
            return Err(Error::InvalidConfig("eps_div must be >= 0".into()));
        }
        if !(self.tol_stop >= F::zero()) {
            return Err(Error::InvalidConfig("tol_stop must be >= 0".into()));
        }
        let BinPartition::RowBlocks { workers } = self.bin_partition;
        if workers == 0 {
            return Err(Error::InvalidConfig("worker count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Partition strategy over the `d²` frequency bins. Bins are independent, so
/// any partition is legal; contiguous row blocks keep memory access simple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinPartition {
    RowBlocks { workers: usize },
}

impl Default for BinPartition {
    fn default() -> Self {
        BinPartition::RowBlocks { workers: 1 }
    }
}

impl BinPartition {
    pub fn workers(&self) -> usize {
        match self {
            BinPartition::RowBlocks { workers } => (*workers).max(1),
        }
    }
}

/// Diagnostics from one `solve` call. Filter-change magnitudes are measured
/// on the spectral entries `|ΔW|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub per_cycle_max_sq_change: Vec<f64>,
    pub per_cycle_mean_sq_change: Vec<f64>,
    pub setup_time: Duration,
    pub solve_time: Duration,
    pub bins_solved: usize,
    pub mode: StatsMode,
    pub cycles_run: usize,
}

/// Immutable view of the per-sample spectra the update kernel consumes.
/// Literal mode is served by a single pseudo-sample built from the sums.
enum SampleSet<'a, F> {
    Exact(&'a [SpectralSample<F>]),
    Literal(SpectralSample<F>),
}

impl<'a, F: Scalar> SampleSet<'a, F> {
    fn for_mode(stats: &'a SufficientStats<F>, mode: StatsMode) -> Result<Self> {
        match mode {
            StatsMode::Literal => {
                let k = stats.filter_count();
                let h = (0..k).map(|i| stats.h_sum(i).clone()).collect();
                let d = (0..k).map(|i| stats.d_sum(i).clone()).collect();
                Ok(SampleSet::Literal(SpectralSample::from_parts(
                    h,
                    stats.x_sum().clone(),
                    d,
                )?))
            }
            StatsMode::Exact => {
                if stats.mode() != StatsMode::Exact {
                    return Err(Error::ModeMismatch(
                        "exact update rule needs exact-mode statistics (per-sample spectra)",
                    ));
                }
                Ok(SampleSet::Exact(stats.samples()))
            }
        }
    }

    fn samples(&self) -> &[SpectralSample<F>] {
        match self {
            SampleSet::Exact(s) => s,
            SampleSet::Literal(s) => std::slice::from_ref(s),
        }
    }
}

/// One literal-rule coordinate update for filter `k`, evaluated on the summed
/// statistics exactly as the closed-form ratio prescribes:
/// `(H̄_N(k)⊙X_N − Σ_{i≠k} W(i)⊙(H_N(i)⊙H̄_N(k) + λ·D_N(i)⊙D̄_N(k)))
///  / (H_N(k)⊙H̄_N(k) + λ·D_N(k)⊙D̄_N(k) + eps)`.
pub fn cd_update_literal<F: Scalar>(
    stats: &SufficientStats<F>,
    dec: &DecoderFilters<F>,
    k: usize,
    cfg: &SolverConfig<F>,
) -> Result<ComplexPlane<F>> {
    let set = SampleSet::for_mode(stats, StatsMode::Literal)?;
    cd_update_on_samples(set.samples(), dec, k, cfg)
}

/// One exact coordinate update for filter `k`: the true minimizer of the
/// sample-averaged objective along that coordinate. Requires exact-mode
/// statistics; collapses to the literal rule at `N = 1`.
pub fn cd_update_exact<F: Scalar>(
    stats: &SufficientStats<F>,
    dec: &DecoderFilters<F>,
    k: usize,
    cfg: &SolverConfig<F>,
) -> Result<ComplexPlane<F>> {
    let set = SampleSet::for_mode(stats, StatsMode::Exact)?;
    cd_update_on_samples(set.samples(), dec, k, cfg)
}

/// Shared closed-form coordinate step over an explicit sample list.
fn cd_update_on_samples<F: Scalar>(
    samples: &[SpectralSample<F>],
    dec: &DecoderFilters<F>,
    k: usize,
    cfg: &SolverConfig<F>,
) -> Result<ComplexPlane<F>> {
    cfg.validate()?;
    let kcount = dec.filter_count();
    if k >= kcount {
        return Err(Error::FilterIndexOutOfRange { index: k, count: kcount });
    }
    let d = dec.grid_side();
    let lambda = cfg.lambda;

    let mut numerator = ComplexPlane::zeros(d, d);
    let mut denominator = ComplexPlane::zeros(d, d);
    for s in samples {
        crate::plane::check_same_dims("cd update grid", (d, d), s.grid_dims())?;
        if s.filter_count() != kcount {
            return Err(Error::DimMismatch {
                context: "cd update filter count",
                expected: (kcount, 1),
                found: (s.filter_count(), 1),
            });
        }
        let hk = s.h(k);
        let dk = s.d(k);
        for idx in 0..d * d {
            let hbar = hk.as_slice()[idx].conj();
            let dbar = dk.as_slice()[idx].conj();

            // Residual against this sample with coordinate k excluded.
            let mut recon = s.x().as_slice()[idx];
            let mut penalty = Complex::new(F::zero(), F::zero());
            for i in 0..kcount {
                if i == k {
                    continue;
                }
                let w = dec.spectral()[i].as_slice()[idx];
                recon = recon - w * s.h(i).as_slice()[idx];
                penalty = penalty + w * s.d(i).as_slice()[idx];
            }

            numerator.as_mut_slice()[idx] =
                numerator.as_slice()[idx] + hbar * recon - (dbar * penalty).scale(lambda);
            denominator.as_mut_slice()[idx] = denominator.as_slice()[idx]
                + hk.as_slice()[idx] * hbar
                + (dk.as_slice()[idx] * dbar).scale(lambda);
        }
    }
    hadamard_div(&numerator, &denominator, cfg.eps_div)
}

/// Per-row, per-cycle change accumulators; folding rows in a fixed order
/// keeps the report identical for every worker count.
struct RowStats {
    sum: Vec<f64>,
    max: Vec<f64>,
    cycles_run: usize,
}

/// Minimizes the objective from zero-initialized filters.
///
/// Runs `cfg.cycles` cyclic CD passes per bin with the mode-selected update
/// rule. Bins are distributed over `cfg.bin_partition` workers; the returned
/// filters and report are bitwise-identical for every worker count.
pub fn solve<F: Scalar>(
    stats: &SufficientStats<F>,
    dims: &ModelDims,
    cfg: &SolverConfig<F>,
) -> Result<(DecoderFilters<F>, SolveReport)> {
    cfg.validate()?;
    if stats.n_seen() == 0 {
        return Err(Error::EmptyStats);
    }
    let d = dims.image_side();
    crate::plane::check_same_dims("solve grid", (d, d), stats.grid_dims())?;
    if stats.filter_count() != dims.filter_count() {
        return Err(Error::DimMismatch {
            context: "solve filter count",
            expected: (dims.filter_count(), 1),
            found: (stats.filter_count(), 1),
        });
    }

    let setup_start = Instant::now();
    let set = SampleSet::for_mode(stats, cfg.mode)?;
    let samples = set.samples();
    let kcount = dims.filter_count();
    let setup_time = setup_start.elapsed();

    let solve_start = Instant::now();
    let workers = cfg.bin_partition.workers().min(d);
    let rows_per_block = d.div_ceil(workers);
    let row_blocks: Vec<(usize, usize)> = (0..d)
        .step_by(rows_per_block)
        .map(|start| (start, (start + rows_per_block).min(d)))
        .collect();

    let block_results: Vec<Result<(Vec<Vec<Complex<F>>>, Vec<RowStats>)>> =
        crate::parallel::map_ordered(&row_blocks, workers, |&(start, end)| {
            solve_row_block(samples, kcount, d, cfg, start, end)
        });

    // Stitch blocks back together in row order.
    let mut filters: Vec<ComplexPlane<F>> =
        (0..kcount).map(|_| ComplexPlane::zeros(d, d)).collect();
    let mut row_stats: Vec<RowStats> = Vec::with_capacity(d);
    for (block_idx, result) in block_results.into_iter().enumerate() {
        let (block_filters, block_rows) = result?;
        let (start, end) = row_blocks[block_idx];
        for k in 0..kcount {
            let rows = end - start;
            filters[k].as_mut_slice()[start * d..(start + rows) * d]
                .copy_from_slice(&block_filters[k]);
        }
        row_stats.extend(block_rows);
    }

    let cycles_run = row_stats.iter().map(|r| r.cycles_run).max().unwrap_or(0);
    let mut per_cycle_max = vec![0.0f64; cycles_run];
    let mut per_cycle_sum = vec![0.0f64; cycles_run];
    for row in &row_stats {
        for (cycle, (&s, &m)) in row.sum.iter().zip(&row.max).enumerate() {
            per_cycle_sum[cycle] += s;
            per_cycle_max[cycle] = per_cycle_max[cycle].max(m);
        }
    }
    let entries = (kcount * d * d) as f64;
    let per_cycle_mean = per_cycle_sum.iter().map(|s| s / entries).collect();

    let report = SolveReport {
        per_cycle_max_sq_change: per_cycle_max,
        per_cycle_mean_sq_change: per_cycle_mean,
        setup_time,
        solve_time: solve_start.elapsed(),
        bins_solved: d * d,
        mode: cfg.mode,
        cycles_run,
    };
    Ok((DecoderFilters::from_spectral(filters)?, report))
}

/// Solves all bins in rows `[start, end)`. Returns the filter rows
/// (row-major, one buffer per filter) and per-row change statistics.
fn solve_row_block<F: Scalar>(
    samples: &[SpectralSample<F>],
    kcount: usize,
    d: usize,
    cfg: &SolverConfig<F>,
    start: usize,
    end: usize,
) -> Result<(Vec<Vec<Complex<F>>>, Vec<RowStats>)> {
    let n = samples.len();
    let lambda = cfg.lambda;
    let eps = cfg.eps_div;
    let zero = Complex::new(F::zero(), F::zero());

    let mut out: Vec<Vec<Complex<F>>> = (0..kcount).map(|_| vec![zero; (end - start) * d]).collect();
    let mut rows = Vec::with_capacity(end - start);

    // Per-bin scratch, reused across bins.
    let mut h_bin = vec![zero; n * kcount];
    let mut d_bin = vec![zero; n * kcount];
    let mut x_bin = vec![zero; n];
    let mut residual = vec![zero; n];
    let mut penalty = vec![zero; n];
    let mut weights = vec![zero; kcount];
    let mut denom = vec![F::zero(); kcount];

    for row in start..end {
        let mut stats_row = RowStats {
            sum: vec![0.0; cfg.cycles],
            max: vec![0.0; cfg.cycles],
            cycles_run: 0,
        };
        for col in 0..d {
            let idx = row * d + col;

            // Gather this bin's spectra once; afterwards every cycle runs on
            // contiguous scratch.
            for (s_idx, s) in samples.iter().enumerate() {
                x_bin[s_idx] = s.x().as_slice()[idx];
                for k in 0..kcount {
                    h_bin[s_idx * kcount + k] = s.h(k).as_slice()[idx];
                    d_bin[s_idx * kcount + k] = s.d(k).as_slice()[idx];
                }
            }

            // Denominators are update-invariant: Σ_n |H|² + λ Σ_n |D|² + eps.
            for k in 0..kcount {
                let mut hh = F::zero();
                let mut dd = F::zero();
                for s_idx in 0..n {
                    hh += h_bin[s_idx * kcount + k].norm_sqr();
                    dd += d_bin[s_idx * kcount + k].norm_sqr();
                }
                let den = hh + lambda * dd + eps;
                if den == F::zero() {
                    return Err(Error::DivisionByZero);
                }
                denom[k] = den;
            }

            // Zero-initialized filters: residual = X, penalty image = 0.
            residual[..n].copy_from_slice(&x_bin[..n]);
            for p in penalty.iter_mut().take(n) {
                *p = zero;
            }
            for w in weights.iter_mut() {
                *w = zero;
            }

            let mut bin_cycles = 0usize;
            for cycle in 0..cfg.cycles {
                let mut cycle_max = F::zero();
                let mut cycle_sum = F::zero();
                for k in 0..kcount {
                    let w_old = weights[k];
                    // numerator = Σ_n H̄(R_n + w_old·H) − λ Σ_n D̄(P_n − w_old·D),
                    // accumulated in ascending sample order for determinism.
                    let mut num = zero;
                    for s_idx in 0..n {
                        let h = h_bin[s_idx * kcount + k];
                        let dv = d_bin[s_idx * kcount + k];
                        num = num + h.conj() * (residual[s_idx] + w_old * h)
                            - (dv.conj() * (penalty[s_idx] - w_old * dv)).scale(lambda);
                    }
                    let w_new = num.unscale(denom[k]);
                    let delta = w_new - w_old;
                    let change = delta.norm_sqr();
                    cycle_max = cycle_max.max(change);
                    cycle_sum += change;
                    weights[k] = w_new;
                    for s_idx in 0..n {
                        residual[s_idx] = residual[s_idx] - delta * h_bin[s_idx * kcount + k];
                        penalty[s_idx] = penalty[s_idx] + delta * d_bin[s_idx * kcount + k];
                    }
                }
                stats_row.sum[cycle] += cycle_sum.to_f64().unwrap_or(f64::NAN);
                stats_row.max[cycle] = stats_row.max[cycle].max(cycle_max.to_f64().unwrap_or(f64::NAN));
                bin_cycles = cycle + 1;
                if cfg.tol_stop > F::zero() && cycle_max <= cfg.tol_stop {
                    break;
                }
            }
            stats_row.cycles_run = stats_row.cycles_run.max(bin_cycles);

            for k in 0..kcount {
                out[k][(row - start) * d + col] = weights[k];
            }
        }
        stats_row.sum.truncate(stats_row.cycles_run.max(1));
        stats_row.max.truncate(stats_row.cycles_run.max(1));
        rows.push(stats_row);
    }
    Ok((out, rows))
}
