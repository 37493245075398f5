//! Deterministic 2D DFT, Hadamard algebra and spatial convolutions.
//!
//! Convention: unnormalized forward transform, `1/(d1·d2)` on the inverse.
//! Spatial and spectral squared norms then differ by exactly `d1·d2`
//! (Parseval), which the loss evaluation accounts for. Both convolutions are
//! true convolutions (kernel flipped), so the convolution theorem holds
//! literally on matched sizes.

use std::any::{Any, TypeId};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::plane::{check_same_dims, ComplexPlane, RealPlane};
use crate::scalar::Scalar;

thread_local! {
    // One planner cache per thread, keyed by (scalar type, length, direction).
    static PLAN_CACHE: RefCell<HashMap<(TypeId, usize, bool), Box<dyn Any>>> =
        RefCell::new(HashMap::new());
}

fn plan<F: Scalar>(len: usize, direction: FftDirection) -> Arc<dyn Fft<F>> {
    let key = (
        TypeId::of::<F>(),
        len,
        matches!(direction, FftDirection::Inverse),
    );
    PLAN_CACHE.with(|cache| {
        let mut map = cache.borrow_mut();
        if let Some(existing) = map.get(&key).and_then(|b| b.downcast_ref::<Arc<dyn Fft<F>>>()) {
            return existing.clone();
        }
        let fft = FftPlanner::<F>::new().plan_fft(len, direction);
        map.insert(key, Box::new(fft.clone()));
        fft
    })
}

/// Row-column 2D transform, in place on a row-major buffer.
fn fft2_in_place<F: Scalar>(data: &mut [Complex<F>], rows: usize, cols: usize, dir: FftDirection) {
    let row_fft = plan::<F>(cols, dir);
    for row in data.chunks_exact_mut(cols) {
        row_fft.process(row);
    }
    let col_fft = plan::<F>(rows, dir);
    let mut column = vec![Complex::default(); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        col_fft.process(&mut column);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
}

/// Unnormalized forward 2D DFT of a real plane.
///
/// The output has the same dimensions and satisfies conjugate symmetry.
pub fn dft2<F: Scalar>(plane: &RealPlane<F>) -> ComplexPlane<F> {
    let (rows, cols) = plane.dims();
    let mut data: Vec<Complex<F>> = plane
        .as_slice()
        .iter()
        .map(|&v| Complex::new(v, F::zero()))
        .collect();
    fft2_in_place(&mut data, rows, cols, FftDirection::Forward);
    ComplexPlane::from_vec(rows, cols, data).expect("DFT of a finite plane is finite")
}

/// Inverse 2D DFT with `1/(d1·d2)` normalization, returning the real part.
///
/// The imaginary residue must stay below `imag_tol × max(1, max |real|)`;
/// a larger residue means the input was not the spectrum of a real plane
/// and is reported as [`Error::NonNegligibleImaginaryPart`].
pub fn idft2<F: Scalar>(plane: &ComplexPlane<F>) -> Result<RealPlane<F>> {
    let (rows, cols) = plane.dims();
    let mut data = plane.as_slice().to_vec();
    fft2_in_place(&mut data, rows, cols, FftDirection::Inverse);
    let norm = F::one() / F::from_usize(rows * cols).unwrap();

    let mut max_re = F::zero();
    let mut max_im = F::zero();
    for v in &mut data {
        *v = v.scale(norm);
        max_re = max_re.max(v.re.abs());
        max_im = max_im.max(v.im.abs());
    }
    let limit = F::imag_tol() * F::one().max(max_re);
    if max_im > limit {
        return Err(Error::NonNegligibleImaginaryPart {
            max_imag: max_im.to_f64().unwrap_or(f64::NAN),
            limit: limit.to_f64().unwrap_or(f64::NAN),
        });
    }
    RealPlane::from_vec(rows, cols, data.into_iter().map(|v| v.re).collect())
}

/// Entry-wise complex product of equally sized planes.
pub fn hadamard<F: Scalar>(a: &ComplexPlane<F>, b: &ComplexPlane<F>) -> Result<ComplexPlane<F>> {
    check_same_dims("hadamard", a.dims(), b.dims())?;
    let data = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&x, &y)| x * y)
        .collect();
    ComplexPlane::from_vec(a.rows(), a.cols(), data)
}

/// Entry-wise division `num / (den + eps)` with a real guard `eps ≥ 0`.
///
/// With `eps = 0` a vanishing denominator entry is an error.
pub fn hadamard_div<F: Scalar>(
    num: &ComplexPlane<F>,
    den: &ComplexPlane<F>,
    eps: F,
) -> Result<ComplexPlane<F>> {
    check_same_dims("hadamard_div", num.dims(), den.dims())?;
    let mut data = Vec::with_capacity(num.as_slice().len());
    for (&n, &d) in num.as_slice().iter().zip(den.as_slice()) {
        let guarded = Complex::new(d.re + eps, d.im);
        if guarded.re == F::zero() && guarded.im == F::zero() {
            return Err(Error::DivisionByZero);
        }
        data.push(n / guarded);
    }
    ComplexPlane::from_vec(num.rows(), num.cols(), data)
}

/// Valid true convolution: output `(d1-k1+1) × (d2-k2+1)`, kernel flipped.
pub fn conv_valid<F: Scalar>(image: &RealPlane<F>, kernel: &RealPlane<F>) -> Result<RealPlane<F>> {
    let (ir, ic) = image.dims();
    let (kr, kc) = kernel.dims();
    if kr > ir || kc > ic {
        return Err(Error::KernelTooLarge {
            image: (ir, ic),
            kernel: (kr, kc),
        });
    }
    let or = ir - kr + 1;
    let oc = ic - kc + 1;
    let mut out = RealPlane::zeros(or, oc);
    for r in 0..or {
        for c in 0..oc {
            let mut acc = F::zero();
            for p in 0..kr {
                for q in 0..kc {
                    acc += image[(r + p, c + q)] * kernel[(kr - 1 - p, kc - 1 - q)];
                }
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Full true convolution: output `(m1+k1-1) × (m2+k2-1)`.
///
/// When the map is `h × h` with `h = d - w + 1` and the kernel `w × w`,
/// the output is exactly `d × d`.
pub fn conv_full<F: Scalar>(map: &RealPlane<F>, kernel: &RealPlane<F>) -> RealPlane<F> {
    let (mr, mc) = map.dims();
    let (kr, kc) = kernel.dims();
    let or = mr + kr - 1;
    let oc = mc + kc - 1;
    let mut out = RealPlane::zeros(or, oc);
    for r in 0..mr {
        for c in 0..mc {
            let v = map[(r, c)];
            for p in 0..kr {
                for q in 0..kc {
                    out[(r + p, c + q)] += v * kernel[(p, q)];
                }
            }
        }
    }
    out
}
