//! Scripted experiment sweeps over the frequency-domain auto-encoder
//! pipeline: CPU-time scaling, regularization (λ) sweeps and filter
//! convergence curves, each emitting CSV-ready rows plus a text summary.

pub mod convergence;
pub mod error;
pub mod fit;
pub mod lambda;
pub mod pipeline;
pub mod timing;

pub use convergence::{run_convergence_curve, ConvergencePoint, ConvergenceReport};
pub use error::{BenchError, Result};
pub use fit::{linear_fit, LinearFit};
pub use lambda::{default_lambda_grid, log_grid, run_lambda_sweep, LambdaSummary, LambdaSweepReport};
pub use pipeline::PipelineParams;
pub use timing::{
    measure_speedup, run_timing_sweep, SweepSpec, SweepVariable, TimingFixed, TimingPoint,
    TimingSample, TimingSweepReport,
};
