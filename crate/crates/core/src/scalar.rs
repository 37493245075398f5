//! Scalar abstraction: the whole math core is generic over `f32`/`f64`.

use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rustfft::FftNum;

/// Floating-point scalar usable for planes, transforms and the solver.
///
/// `imag_tol` is the relative threshold below which the imaginary residue of
/// an inverse transform is considered rounding noise and discarded; anything
/// above it is reported as a conjugate-symmetry bug.
pub trait Scalar:
    FftNum + Float + FloatConst + FromPrimitive + NumAssign + Sum<Self> + Default
{
    fn imag_tol() -> Self;
}

impl Scalar for f64 {
    fn imag_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn imag_tol() -> Self {
        1e-3
    }
}
