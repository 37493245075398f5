//! Real and complex 2D grids with row-major storage.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A `d1 × d2` grid of real scalars, stored row-major.
///
/// Houses images, encoding maps, filters and biases. Entries are finite;
/// dimensions are fixed at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPlane<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// A `d1 × d2` grid of complex scalars, stored row-major.
///
/// Houses spectra of real planes and entry-wise products thereof. Spectra of
/// real planes satisfy conjugate symmetry
/// `entry(u, v) = conj(entry((d1 - u) % d1, (d2 - v) % d2))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPlane<F> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<F>>,
}

macro_rules! shared_plane_api {
    ($ty:ident, $elem:ty) => {
        impl<F: Scalar> $ty<F> {
            /// Plane of zeros. Dimensions must be positive.
            pub fn zeros(rows: usize, cols: usize) -> Self {
                assert!(rows > 0 && cols > 0, "plane dimensions must be positive");
                Self {
                    rows,
                    cols,
                    data: vec![<$elem>::default(); rows * cols],
                }
            }

            /// Builds a plane by evaluating `f(row, col)`.
            pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> $elem) -> Self {
                assert!(rows > 0 && cols > 0, "plane dimensions must be positive");
                let mut data = Vec::with_capacity(rows * cols);
                for r in 0..rows {
                    for c in 0..cols {
                        data.push(f(r, c));
                    }
                }
                Self { rows, cols, data }
            }

            /// Wraps an existing row-major buffer, validating length and finiteness.
            pub fn from_vec(rows: usize, cols: usize, data: Vec<$elem>) -> Result<Self> {
                if rows == 0 || cols == 0 || data.len() != rows * cols {
                    return Err(Error::DimMismatch {
                        context: "plane construction",
                        expected: (rows, cols),
                        found: (data.len(), 1),
                    });
                }
                let plane = Self { rows, cols, data };
                if !plane.is_finite() {
                    return Err(Error::NonFinite("plane construction"));
                }
                Ok(plane)
            }

            pub fn dims(&self) -> (usize, usize) {
                (self.rows, self.cols)
            }

            pub fn rows(&self) -> usize {
                self.rows
            }

            pub fn cols(&self) -> usize {
                self.cols
            }

            pub fn as_slice(&self) -> &[$elem] {
                &self.data
            }

            pub fn as_mut_slice(&mut self) -> &mut [$elem] {
                &mut self.data
            }

            pub fn into_vec(self) -> Vec<$elem> {
                self.data
            }

            /// Entry-wise map into a new plane of the same shape.
            pub fn map(&self, f: impl Fn($elem) -> $elem) -> Self {
                Self {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().map(|&v| f(v)).collect(),
                }
            }
        }

        impl<F: Scalar> std::ops::Index<(usize, usize)> for $ty<F> {
            type Output = $elem;
            fn index(&self, (r, c): (usize, usize)) -> &$elem {
                &self.data[r * self.cols + c]
            }
        }

        impl<F: Scalar> std::ops::IndexMut<(usize, usize)> for $ty<F> {
            fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut $elem {
                &mut self.data[r * self.cols + c]
            }
        }
    };
}

shared_plane_api!(RealPlane, F);
shared_plane_api!(ComplexPlane, Complex<F>);

impl<F: Scalar> RealPlane<F> {
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Sum of squared entries (spatial Frobenius norm squared).
    pub fn sq_norm(&self) -> F {
        self.data.iter().fold(F::zero(), |acc, &v| acc + v * v)
    }

    /// Matrix transpose (rows and columns swapped).
    pub fn transposed(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// 180° rotation, i.e. the kernel flip that turns correlation into convolution.
    pub fn rot180(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            self[(self.rows - 1 - r, self.cols - 1 - c)]
        })
    }

    /// Top-left `rows × cols` window.
    pub fn crop(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows > self.rows || cols > self.cols || rows == 0 || cols == 0 {
            return Err(Error::DimMismatch {
                context: "crop",
                expected: (rows, cols),
                found: self.dims(),
            });
        }
        Ok(Self::from_fn(rows, cols, |r, c| self[(r, c)]))
    }

    /// Entry-wise difference; shapes must match.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_dims("sub", self.dims(), other.dims())?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// Entry-wise sum; shapes must match.
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_dims("add", self.dims(), other.dims())?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, s: F) -> Self {
        self.map(|v| v * s)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> F {
        self.data
            .iter()
            .fold(F::zero(), |acc, v| acc.max(v.abs()))
    }
}

impl<F: Scalar> ComplexPlane<F> {
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Sum of squared magnitudes (spectral Frobenius norm squared).
    pub fn sq_norm(&self) -> F {
        self.data
            .iter()
            .fold(F::zero(), |acc, v| acc + v.re * v.re + v.im * v.im)
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// Entry-wise sum; shapes must match.
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_dims("add", self.dims(), other.dims())?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    /// Entry-wise difference; shapes must match.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_dims("sub", self.dims(), other.dims())?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// In-place entry-wise accumulation; shapes must match.
    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        check_same_dims("add_assign", self.dims(), other.dims())?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
        Ok(())
    }

    /// Largest entry magnitude (max-norm over |z|).
    pub fn max_abs(&self) -> F {
        self.data
            .iter()
            .fold(F::zero(), |acc, v| acc.max(v.norm()))
    }

    /// Worst-case deviation from conjugate symmetry, relative to the largest
    /// magnitude. Zero for exact spectra of real planes.
    pub fn conj_symmetry_residual(&self) -> F {
        let scale = self.max_abs().max(F::one());
        let mut worst = F::zero();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let mirror = self[((self.rows - r) % self.rows, (self.cols - c) % self.cols)];
                let diff = self[(r, c)] - mirror.conj();
                worst = worst.max(diff.norm());
            }
        }
        worst / scale
    }
}

pub(crate) fn check_same_dims(
    context: &'static str,
    a: (usize, usize),
    b: (usize, usize),
) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimMismatch {
            context,
            expected: a,
            found: b,
        })
    }
}

/// Copies `plane` into the top-left corner of a larger zero plane.
///
/// Needed so `w × w` kernels and `h × h` maps share the `d × d` spectral grid.
pub fn pad_to<F: Scalar>(plane: &RealPlane<F>, dims: (usize, usize)) -> Result<RealPlane<F>> {
    let (sr, sc) = plane.dims();
    let (tr, tc) = dims;
    if tr < sr || tc < sc {
        return Err(Error::TargetTooSmall {
            origin: (sr, sc),
            target: (tr, tc),
        });
    }
    let mut out = RealPlane::zeros(tr, tc);
    for r in 0..sr {
        for c in 0..sc {
            out[(r, c)] = plane[(r, c)];
        }
    }
    Ok(out)
}
