//! Frequency-domain training core for single-layer convolutional auto-encoders
//! with randomly fixed encoders.
//!
//! The reconstruction function is `r(x) = Σ_k w(k) * g(Σ_c a(k) * x(c) + b(k))`
//! where the encoding filters `a(k)` and biases `b(k)` are sampled once from a
//! seeded generator and never trained. Only the linear decoding filters `w(k)`
//! are learned, which makes the regularized reconstruction objective convex.
//! Transforming it with the 2D DFT decouples the problem into `d²` independent
//! K-dimensional complex least-squares problems, one per frequency bin, which
//! are minimized here by cyclic coordinate descent over the filters.
//!
//! Layout:
//! - [`plane`]: real/complex 2D grids and zero-padding.
//! - [`spectral`]: forward/inverse DFT, Hadamard algebra, spatial convolutions.
//! - [`model`]: encoder/decoder parameters, encode/reconstruct/inference passes.
//! - [`stats`]: per-frequency sufficient statistics accumulated over a dataset.
//! - [`solver`]: the per-bin coordinate-descent solver.
//! - [`objective`]: spatial and spectral evaluation of the training loss.
//!
//! All numeric code is generic over the scalar type through [`Scalar`];
//! concrete aliases for the common precisions live at the crate root.

pub mod error;
pub mod model;
pub mod objective;
pub mod parallel;
pub mod plane;
pub mod scalar;
pub mod solver;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use model::{
    encode, encode_with, infer_features, init_encoder, reconstruct, reconstruct_from_encoding,
    Activation, DecoderFilters, EncoderParams, EncodingResult, FilterSupport, Image, InferOptions,
    ModelDims, TransposeMode,
};
pub use objective::{loss_spatial, loss_spectral, loss_spectral_samples, reconstruction_error, LossBreakdown};
pub use plane::{pad_to, ComplexPlane, RealPlane};
pub use scalar::Scalar;
pub use solver::{
    cd_update_exact, cd_update_literal, solve, BinPartition, SolveReport, SolverConfig,
};
pub use spectral::{conv_full, conv_valid, dft2, hadamard, hadamard_div, idft2};
pub use stats::{
    absorb, ingest_batch, lift_sample, lift_sample_with, merge, SpectralSample, StatsMode,
    SufficientStats,
};

/// Double-precision real plane.
pub type RealPlane64 = RealPlane<f64>;
/// Double-precision complex plane.
pub type ComplexPlane64 = ComplexPlane<f64>;
/// Single-precision real plane.
pub type RealPlane32 = RealPlane<f32>;
/// Single-precision complex plane.
pub type ComplexPlane32 = ComplexPlane<f32>;
