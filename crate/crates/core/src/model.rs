//! Auto-encoder parameters and the forward encode/decode/inference passes.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::plane::{pad_to, ComplexPlane, RealPlane};
use crate::scalar::Scalar;
use crate::spectral::{conv_valid, dft2, hadamard, idft2};

/// Model dimensions: `d × d` images with `C` channels, `K` filters of side
/// `w`, encoding maps of side `h = d - w + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelDims {
    d: usize,
    w: usize,
    c: usize,
    k: usize,
}

impl ModelDims {
    pub fn new(d: usize, w: usize, c: usize, k: usize) -> Result<Self> {
        if d == 0 || w == 0 || c == 0 || k == 0 {
            return Err(Error::InvalidConfig(
                "model dimensions must all be at least 1".into(),
            ));
        }
        if w > d {
            return Err(Error::InvalidConfig(format!(
                "filter side w = {w} must not exceed image side d = {d}"
            )));
        }
        Ok(Self { d, w, c, k })
    }

    pub fn image_side(&self) -> usize {
        self.d
    }

    pub fn filter_side(&self) -> usize {
        self.w
    }

    pub fn channels(&self) -> usize {
        self.c
    }

    pub fn filter_count(&self) -> usize {
        self.k
    }

    /// Encoding-map side for valid convolution.
    pub fn map_side(&self) -> usize {
        self.d - self.w + 1
    }
}

/// A `C`-channel `d × d` image.
#[derive(Clone, Debug, PartialEq)]
pub struct Image<F> {
    channels: Vec<RealPlane<F>>,
}

impl<F: Scalar> Image<F> {
    pub fn new(channels: Vec<RealPlane<F>>) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::InvalidConfig("image needs at least one channel".into()))?
            .dims();
        for ch in &channels {
            crate::plane::check_same_dims("image channels", first, ch.dims())?;
        }
        Ok(Self { channels })
    }

    pub fn from_plane(plane: RealPlane<F>) -> Self {
        Self {
            channels: vec![plane],
        }
    }

    pub fn channels(&self) -> &[RealPlane<F>] {
        &self.channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.channels[0].dims()
    }

    /// Entry-wise sum over channels: the reconstruction target.
    pub fn channel_sum(&self) -> RealPlane<F> {
        let mut acc = self.channels[0].clone();
        for ch in &self.channels[1..] {
            acc = acc.add(ch).expect("channels share dims");
        }
        acc
    }
}

/// Activation applied entry-wise by the encoder. Closed set: the training
/// derivation requires a twice-differentiable function, and only `Tanh` is
/// supported in the pipeline; `Linear` exists for degenerate-case diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Linear,
}

impl Activation {
    /// g(v)
    pub fn apply<F: Scalar>(&self, v: F) -> F {
        match self {
            Activation::Tanh => v.tanh(),
            Activation::Linear => v,
        }
    }

    /// g'(v)
    pub fn derivative<F: Scalar>(&self, v: F) -> F {
        match self {
            Activation::Tanh => {
                let t = v.tanh();
                F::one() - t * t
            }
            Activation::Linear => F::one(),
        }
    }
}

/// Frozen encoding parameters: `K` filters `a(k)` of side `w` and `K` bias
/// planes `b(k)` of side `h`, sampled once from a seeded generator and never
/// touched by the solver.
#[derive(Clone, Debug)]
pub struct EncoderParams<F> {
    dims: ModelDims,
    filters: Vec<RealPlane<F>>,
    biases: Vec<RealPlane<F>>,
    seed: u64,
    sigma_a: F,
    sigma_b: F,
    // Spectra of the zero-padded filters, computed once on first use.
    filter_spectra: OnceLock<Vec<ComplexPlane<F>>>,
}

impl<F: Scalar> PartialEq for EncoderParams<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self.filters == other.filters
            && self.biases == other.biases
            && self.seed == other.seed
            && self.sigma_a == other.sigma_a
            && self.sigma_b == other.sigma_b
    }
}

impl<F: Scalar> EncoderParams<F> {
    /// Wraps explicit filters and biases (used by tests and degenerate setups).
    pub fn from_parts(
        dims: ModelDims,
        filters: Vec<RealPlane<F>>,
        biases: Vec<RealPlane<F>>,
    ) -> Result<Self> {
        if filters.len() != dims.filter_count() || biases.len() != dims.filter_count() {
            return Err(Error::InvalidConfig(format!(
                "expected {} filters and biases, got {} and {}",
                dims.filter_count(),
                filters.len(),
                biases.len()
            )));
        }
        let w = dims.filter_side();
        let h = dims.map_side();
        for f in &filters {
            crate::plane::check_same_dims("encoder filter", (w, w), f.dims())?;
        }
        for b in &biases {
            crate::plane::check_same_dims("encoder bias", (h, h), b.dims())?;
        }
        Ok(Self {
            dims,
            filters,
            biases,
            seed: 0,
            sigma_a: F::zero(),
            sigma_b: F::zero(),
            filter_spectra: OnceLock::new(),
        })
    }

    pub fn dims(&self) -> ModelDims {
        self.dims
    }

    pub fn filters(&self) -> &[RealPlane<F>] {
        &self.filters
    }

    pub fn biases(&self) -> &[RealPlane<F>] {
        &self.biases
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sigma_a(&self) -> F {
        self.sigma_a
    }

    pub fn sigma_b(&self) -> F {
        self.sigma_b
    }

    /// Spectra `A(k)` of the zero-padded encoding filters on the `d × d` grid.
    pub fn filter_spectra(&self) -> &[ComplexPlane<F>] {
        self.filter_spectra.get_or_init(|| {
            let d = self.dims.image_side();
            self.filters
                .iter()
                .map(|a| dft2(&pad_to(a, (d, d)).expect("w <= d by construction")))
                .collect()
        })
    }
}

/// Samples frozen encoder parameters: filter entries i.i.d. `N(0, sigma_a²)`,
/// bias entries i.i.d. `N(0, sigma_b²)`, from a ChaCha stream seeded with
/// `seed`. The same seed reproduces the same parameters bit for bit.
pub fn init_encoder<F: Scalar>(
    dims: ModelDims,
    seed: u64,
    sigma_a: F,
    sigma_b: F,
) -> Result<EncoderParams<F>>
where
    StandardNormal: Distribution<F>,
{
    for sigma in [sigma_a, sigma_b] {
        if !(sigma > F::zero()) || !sigma.is_finite() {
            return Err(Error::InvalidSigma(sigma.to_f64().unwrap_or(f64::NAN)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filter_dist = Normal::new(F::zero(), sigma_a)
        .map_err(|_| Error::InvalidSigma(sigma_a.to_f64().unwrap_or(f64::NAN)))?;
    let bias_dist = Normal::new(F::zero(), sigma_b)
        .map_err(|_| Error::InvalidSigma(sigma_b.to_f64().unwrap_or(f64::NAN)))?;

    let w = dims.filter_side();
    let h = dims.map_side();
    // Draw order is fixed: all filters in index order, then all biases.
    let filters = (0..dims.filter_count())
        .map(|_| RealPlane::from_fn(w, w, |_, _| filter_dist.sample(&mut rng)))
        .collect();
    let biases = (0..dims.filter_count())
        .map(|_| RealPlane::from_fn(h, h, |_, _| bias_dist.sample(&mut rng)))
        .collect();

    Ok(EncoderParams {
        dims,
        filters,
        biases,
        seed,
        sigma_a,
        sigma_b,
        filter_spectra: OnceLock::new(),
    })
}

/// Encoder output for one image: pre-activations `v(k)`, encoding maps
/// `h(k) = g(v(k))` and derivative maps `g'(v(k))`, all `h × h`.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodingResult<F> {
    pub preactivation: Vec<RealPlane<F>>,
    pub maps: Vec<RealPlane<F>>,
    pub derivmaps: Vec<RealPlane<F>>,
}

/// Forward encoding with the default `tanh` activation.
pub fn encode<F: Scalar>(x: &Image<F>, enc: &EncoderParams<F>) -> Result<EncodingResult<F>> {
    encode_with(x, enc, Activation::Tanh)
}

/// Forward encoding: `v(k) = Σ_c a(k) * x(c) + b(k)` (valid convolution),
/// `maps = g(v)`, `derivmaps = g'(v)`.
pub fn encode_with<F: Scalar>(
    x: &Image<F>,
    enc: &EncoderParams<F>,
    activation: Activation,
) -> Result<EncodingResult<F>> {
    let dims = enc.dims();
    let d = dims.image_side();
    crate::plane::check_same_dims("encode image", (d, d), x.dims())?;
    if x.channel_count() != dims.channels() {
        return Err(Error::DimMismatch {
            context: "encode channels",
            expected: (dims.channels(), 1),
            found: (x.channel_count(), 1),
        });
    }

    let mut preactivation = Vec::with_capacity(dims.filter_count());
    let mut maps = Vec::with_capacity(dims.filter_count());
    let mut derivmaps = Vec::with_capacity(dims.filter_count());
    for (a, b) in enc.filters().iter().zip(enc.biases()) {
        let mut v = b.clone();
        for ch in x.channels() {
            v = v.add(&conv_valid(ch, a)?)?;
        }
        maps.push(v.map(|t| activation.apply(t)));
        derivmaps.push(v.map(|t| activation.derivative(t)));
        preactivation.push(v);
    }
    Ok(EncodingResult {
        preactivation,
        maps,
        derivmaps,
    })
}

/// Learned decoding filters, primary representation is spectral: `K` complex
/// `d × d` planes `W(k)`. The spatial filters `w(k) = idft2(W(k))` are derived
/// on demand so the two views can never drift apart.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoderFilters<F> {
    spectral: Vec<ComplexPlane<F>>,
    d: usize,
}

impl<F: Scalar> DecoderFilters<F> {
    /// The all-zero initialization the solver starts from.
    pub fn zeros(dims: ModelDims) -> Self {
        let d = dims.image_side();
        Self {
            spectral: (0..dims.filter_count())
                .map(|_| ComplexPlane::zeros(d, d))
                .collect(),
            d,
        }
    }

    pub fn from_spectral(spectral: Vec<ComplexPlane<F>>) -> Result<Self> {
        let first = spectral
            .first()
            .ok_or_else(|| Error::InvalidConfig("decoder needs at least one filter".into()))?
            .dims();
        if first.0 != first.1 {
            return Err(Error::InvalidConfig("decoder planes must be square".into()));
        }
        for p in &spectral {
            crate::plane::check_same_dims("decoder filters", first, p.dims())?;
        }
        Ok(Self {
            d: first.0,
            spectral,
        })
    }

    pub fn filter_count(&self) -> usize {
        self.spectral.len()
    }

    pub fn grid_side(&self) -> usize {
        self.d
    }

    pub fn spectral(&self) -> &[ComplexPlane<F>] {
        &self.spectral
    }

    pub fn spectral_mut(&mut self) -> &mut [ComplexPlane<F>] {
        &mut self.spectral
    }

    /// Spatial filters at full `d × d` support.
    pub fn spatial(&self) -> Result<Vec<RealPlane<F>>> {
        self.spectral.iter().map(idft2).collect()
    }

    /// Spatial filters cropped to their canonical `w × w` window (the padded
    /// corner the spectral grid embeds kernels into). Export convenience; the
    /// solver itself never constrains support.
    pub fn spatial_cropped(&self, w: usize) -> Result<Vec<RealPlane<F>>> {
        self.spatial()?
            .iter()
            .map(|p| p.crop(w, w))
            .collect()
    }
}

/// Spectral decoding pass on precomputed encoding maps:
/// `idft2(Σ_k W(k) ⊙ dft2(pad(h(k))))`, a `d × d` plane.
pub fn reconstruct_from_encoding<F: Scalar>(
    encoding: &EncodingResult<F>,
    dec: &DecoderFilters<F>,
) -> Result<RealPlane<F>> {
    if encoding.maps.len() != dec.filter_count() {
        return Err(Error::DimMismatch {
            context: "reconstruct filters",
            expected: (dec.filter_count(), 1),
            found: (encoding.maps.len(), 1),
        });
    }
    let d = dec.grid_side();
    let mut acc = ComplexPlane::zeros(d, d);
    for (map, w) in encoding.maps.iter().zip(dec.spectral()) {
        let spectrum = dft2(&pad_to(map, (d, d))?);
        acc.add_assign(&hadamard(w, &spectrum)?)?;
    }
    idft2(&acc)
}

/// Full decoding pass `r(x) = Σ_k w(k) * h(k)`, evaluated spectrally.
pub fn reconstruct<F: Scalar>(
    x: &Image<F>,
    enc: &EncoderParams<F>,
    dec: &DecoderFilters<F>,
) -> Result<RealPlane<F>> {
    reconstruct_from_encoding(&encode(x, enc)?, dec)
}

/// How the learned decoding filter is oriented for inference.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TransposeMode {
    /// Literal matrix transpose of the 2D filter (rows and columns swapped).
    #[default]
    MatrixTranspose,
    /// 180° rotation, the conventional "flipped filter" reading.
    Rot180,
}

/// Which support of the spatial decoder filter drives inference.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FilterSupport {
    /// Full `d × d` support as learned (valid convolution then yields a 1×1 map).
    #[default]
    Full,
    /// Crop to the canonical `w × w` window first, yielding `h × h` maps
    /// suitable for stacking into a further layer.
    Cropped(usize),
}

/// Inference options; defaults follow the learned representation literally.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct InferOptions {
    pub activation_is_linear: bool,
    pub transpose: TransposeMode,
    pub support: FilterSupport,
}

impl InferOptions {
    fn activation(&self) -> Activation {
        if self.activation_is_linear {
            Activation::Linear
        } else {
            Activation::Tanh
        }
    }
}

/// Feature inference with the learned decoders:
/// `ĥ(k) = g(Σ_c transpose(w(k)) * x(c))` (valid convolution, no bias).
pub fn infer_features<F: Scalar>(
    x: &Image<F>,
    dec: &DecoderFilters<F>,
    opts: InferOptions,
) -> Result<Vec<RealPlane<F>>> {
    let activation = opts.activation();
    let spatial = match opts.support {
        FilterSupport::Full => dec.spatial()?,
        FilterSupport::Cropped(w) => dec.spatial_cropped(w)?,
    };
    let mut features = Vec::with_capacity(spatial.len());
    for filter in &spatial {
        let kernel = match opts.transpose {
            TransposeMode::MatrixTranspose => filter.transposed(),
            TransposeMode::Rot180 => filter.rot180(),
        };
        let mut acc: Option<RealPlane<F>> = None;
        for ch in x.channels() {
            let conv = conv_valid(ch, &kernel)?;
            acc = Some(match acc {
                None => conv,
                Some(prev) => prev.add(&conv)?,
            });
        }
        let map = acc.expect("image has at least one channel");
        features.push(map.map(|v| activation.apply(v)));
    }
    Ok(features)
}

/// Spectrum of the channel-sum target `X = Σ_c dft2(x(c))`.
pub fn target_spectrum<F: Scalar>(x: &Image<F>) -> ComplexPlane<F> {
    dft2(&x.channel_sum())
}
