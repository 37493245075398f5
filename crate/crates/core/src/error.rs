//! Error type shared by all core operations.

use thiserror::Error;

/// Errors raised by the math core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two planes (or a plane and the model dimensions) disagree in shape.
    #[error("dimension mismatch in {context}: expected {expected:?}, found {found:?}")]
    DimMismatch {
        context: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },

    /// Padding target is smaller than the source plane.
    #[error("pad target {target:?} is smaller than source {origin:?}")]
    TargetTooSmall {
        origin: (usize, usize),
        target: (usize, usize),
    },

    /// Valid convolution requires the kernel to fit inside the image.
    #[error("kernel {kernel:?} does not fit inside image {image:?}")]
    KernelTooLarge {
        image: (usize, usize),
        kernel: (usize, usize),
    },

    /// The inverse DFT produced an imaginary part too large to discard,
    /// which signals a conjugate-symmetry bug upstream.
    #[error("inverse DFT imaginary residue {max_imag:e} exceeds limit {limit:e}")]
    NonNegligibleImaginaryPart { max_imag: f64, limit: f64 },

    /// Entry-wise division hit a zero denominator with no guard.
    #[error("entry-wise division by zero (eps = 0 and a denominator entry vanished)")]
    DivisionByZero,

    /// A plane contains NaN or infinite entries.
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    /// Encoder sampling densities need strictly positive, finite widths.
    #[error("invalid sampling standard deviation: {0}")]
    InvalidSigma(f64),

    /// Operation requires statistics in a different retention mode.
    #[error("statistics mode mismatch: {0}")]
    ModeMismatch(&'static str),

    /// The solver needs at least one absorbed sample.
    #[error("sufficient statistics are empty (no samples absorbed)")]
    EmptyStats,

    /// A loss evaluation was asked for over zero samples.
    #[error("empty batch")]
    EmptyBatch,

    /// Filter index outside `0..K`.
    #[error("filter index {index} out of range (K = {count})")]
    FilterIndexOutOfRange { index: usize, count: usize },

    /// A configuration value violates its documented range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Convenience alias used throughout the core.
pub type Result<T> = std::result::Result<T, Error>;
