//! Per-frequency sufficient statistics accumulated over training images.
//!
//! For each sample `n` the lifted quantities are
//! `H_n(k) = dft2(pad(h_n(k)))`, `X_n = Σ_c dft2(x_n(c))` and
//! `D_n(k) = G_n(k) ⊙ A(k)` with `G_n(k) = dft2(pad(g'(v_n(k))))`.
//! The running sums `H_N`, `X_N`, `D_N` fully determine the literal update
//! rule; the exact per-coordinate minimizer additionally needs per-sample
//! cross products, so exact mode retains the lifted samples themselves
//! (storing all K² cross-Gram planes instead would cost O(K²d²)).

use crate::error::{Error, Result};
use crate::model::{encode_with, target_spectrum, Activation, EncoderParams, Image};
use crate::plane::{check_same_dims, pad_to, ComplexPlane};
use crate::scalar::Scalar;
use crate::spectral::{dft2, hadamard};

/// Whether statistics keep only running sums or also the per-sample spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatsMode {
    /// Only the summed planes; O(K·d²) memory regardless of sample count.
    Literal,
    /// Sums plus every lifted sample; memory grows linearly with samples.
    Exact,
}

/// One training image lifted to the frequency domain.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSample<F> {
    h: Vec<ComplexPlane<F>>,
    x: ComplexPlane<F>,
    d: Vec<ComplexPlane<F>>,
}

impl<F: Scalar> SpectralSample<F> {
    pub fn from_parts(
        h: Vec<ComplexPlane<F>>,
        x: ComplexPlane<F>,
        d: Vec<ComplexPlane<F>>,
    ) -> Result<Self> {
        if h.len() != d.len() || h.is_empty() {
            return Err(Error::InvalidConfig(
                "sample needs matching, non-empty H and D plane lists".into(),
            ));
        }
        for p in h.iter().chain(d.iter()) {
            check_same_dims("spectral sample", x.dims(), p.dims())?;
        }
        Ok(Self { h, x, d })
    }

    pub fn filter_count(&self) -> usize {
        self.h.len()
    }

    pub fn grid_dims(&self) -> (usize, usize) {
        self.x.dims()
    }

    /// Map spectrum `H(k)`.
    pub fn h(&self, k: usize) -> &ComplexPlane<F> {
        &self.h[k]
    }

    /// Target spectrum `X`.
    pub fn x(&self) -> &ComplexPlane<F> {
        &self.x
    }

    /// Contractive spectrum `D(k) = G(k) ⊙ A(k)`.
    pub fn d(&self, k: usize) -> &ComplexPlane<F> {
        &self.d[k]
    }
}

/// Lifts one image with the default `tanh` activation.
pub fn lift_sample<F: Scalar>(x: &Image<F>, enc: &EncoderParams<F>) -> Result<SpectralSample<F>> {
    lift_sample_with(x, enc, Activation::Tanh)
}

/// Lifts one image into its spectral sufficient-statistic contribution.
pub fn lift_sample_with<F: Scalar>(
    x: &Image<F>,
    enc: &EncoderParams<F>,
    activation: Activation,
) -> Result<SpectralSample<F>> {
    let dims = enc.dims();
    let d = dims.image_side();
    let encoding = encode_with(x, enc, activation)?;
    let filter_spectra = enc.filter_spectra();

    let mut h = Vec::with_capacity(dims.filter_count());
    let mut dplanes = Vec::with_capacity(dims.filter_count());
    for k in 0..dims.filter_count() {
        h.push(dft2(&pad_to(&encoding.maps[k], (d, d))?));
        let g = dft2(&pad_to(&encoding.derivmaps[k], (d, d))?);
        dplanes.push(hadamard(&g, &filter_spectra[k])?);
    }
    SpectralSample::from_parts(h, target_spectrum(x), dplanes)
}

/// Accumulated statistics over `n_seen` samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SufficientStats<F> {
    h_sum: Vec<ComplexPlane<F>>,
    x_sum: ComplexPlane<F>,
    d_sum: Vec<ComplexPlane<F>>,
    n_seen: usize,
    mode: StatsMode,
    samples: Vec<SpectralSample<F>>,
}

impl<F: Scalar> SufficientStats<F> {
    /// Empty statistics for `k` filters on a `d × d` spectral grid.
    pub fn empty(k: usize, d: usize, mode: StatsMode) -> Self {
        Self {
            h_sum: (0..k).map(|_| ComplexPlane::zeros(d, d)).collect(),
            x_sum: ComplexPlane::zeros(d, d),
            d_sum: (0..k).map(|_| ComplexPlane::zeros(d, d)).collect(),
            n_seen: 0,
            mode,
            samples: Vec::new(),
        }
    }

    /// Rebuilds statistics from previously saved parts; sums must correspond
    /// to the sample list in exact mode (not revalidated here).
    pub fn from_parts(
        h_sum: Vec<ComplexPlane<F>>,
        x_sum: ComplexPlane<F>,
        d_sum: Vec<ComplexPlane<F>>,
        n_seen: usize,
        mode: StatsMode,
        samples: Vec<SpectralSample<F>>,
    ) -> Result<Self> {
        if h_sum.len() != d_sum.len() || h_sum.is_empty() {
            return Err(Error::InvalidConfig(
                "statistics need matching, non-empty H and D plane lists".into(),
            ));
        }
        for p in h_sum.iter().chain(d_sum.iter()) {
            check_same_dims("stats planes", x_sum.dims(), p.dims())?;
        }
        if mode == StatsMode::Exact && samples.len() != n_seen {
            return Err(Error::ModeMismatch(
                "exact-mode statistics must retain one sample per absorbed image",
            ));
        }
        Ok(Self {
            h_sum,
            x_sum,
            d_sum,
            n_seen,
            mode,
            samples,
        })
    }

    pub fn filter_count(&self) -> usize {
        self.h_sum.len()
    }

    pub fn grid_dims(&self) -> (usize, usize) {
        self.x_sum.dims()
    }

    pub fn n_seen(&self) -> usize {
        self.n_seen
    }

    pub fn mode(&self) -> StatsMode {
        self.mode
    }

    /// `H_N(k) = Σ_n H_n(k)`
    pub fn h_sum(&self, k: usize) -> &ComplexPlane<F> {
        &self.h_sum[k]
    }

    /// `X_N = Σ_n X_n`
    pub fn x_sum(&self) -> &ComplexPlane<F> {
        &self.x_sum
    }

    /// `D_N(k) = Σ_n D_n(k)`
    pub fn d_sum(&self, k: usize) -> &ComplexPlane<F> {
        &self.d_sum[k]
    }

    /// Retained samples (empty in literal mode).
    pub fn samples(&self) -> &[SpectralSample<F>] {
        &self.samples
    }
}

/// Folds one lifted sample into the statistics, returning the updated value.
pub fn absorb<F: Scalar>(
    mut stats: SufficientStats<F>,
    sample: SpectralSample<F>,
) -> Result<SufficientStats<F>> {
    if sample.filter_count() != stats.filter_count() {
        return Err(Error::DimMismatch {
            context: "absorb filter count",
            expected: (stats.filter_count(), 1),
            found: (sample.filter_count(), 1),
        });
    }
    check_same_dims("absorb grid", stats.grid_dims(), sample.grid_dims())?;

    for (sum, plane) in stats.h_sum.iter_mut().zip(&sample.h) {
        sum.add_assign(plane)?;
    }
    stats.x_sum.add_assign(&sample.x)?;
    for (sum, plane) in stats.d_sum.iter_mut().zip(&sample.d) {
        sum.add_assign(plane)?;
    }
    stats.n_seen += 1;
    if stats.mode == StatsMode::Exact {
        stats.samples.push(sample);
    }
    Ok(stats)
}

/// Lifts a batch (in parallel, order preserved) and absorbs it in sample
/// order. Output is bitwise identical for every worker count.
pub fn ingest_batch<F: Scalar>(
    images: &[Image<F>],
    enc: &EncoderParams<F>,
    mode: StatsMode,
    workers: usize,
) -> Result<SufficientStats<F>> {
    let dims = enc.dims();
    // Warm the shared filter-spectra cache before forking.
    let _ = enc.filter_spectra();
    let samples = crate::parallel::map_ordered(images, workers, |x| lift_sample(x, enc));
    let mut stats = SufficientStats::empty(dims.filter_count(), dims.image_side(), mode);
    for sample in samples {
        stats = absorb(stats, sample?)?;
    }
    Ok(stats)
}

/// Merges two shards: entry-wise sums, sample lists concatenated in order.
pub fn merge<F: Scalar>(
    mut a: SufficientStats<F>,
    b: SufficientStats<F>,
) -> Result<SufficientStats<F>> {
    if a.mode != b.mode {
        return Err(Error::ModeMismatch("cannot merge literal with exact statistics"));
    }
    if a.filter_count() != b.filter_count() {
        return Err(Error::DimMismatch {
            context: "merge filter count",
            expected: (a.filter_count(), 1),
            found: (b.filter_count(), 1),
        });
    }
    check_same_dims("merge grid", a.grid_dims(), b.grid_dims())?;

    for (sum, plane) in a.h_sum.iter_mut().zip(&b.h_sum) {
        sum.add_assign(plane)?;
    }
    a.x_sum.add_assign(&b.x_sum)?;
    for (sum, plane) in a.d_sum.iter_mut().zip(&b.d_sum) {
        sum.add_assign(plane)?;
    }
    a.n_seen += b.n_seen;
    a.samples.extend(b.samples);
    Ok(a)
}
