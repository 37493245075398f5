//! Image whitening. Statistics are fitted on the training split only and
//! carried by an explicit [`Whitener`], so evaluation data can never leak
//! into them.

use rcae_core::{dft2, hadamard_div, idft2, ComplexPlane, Image, RealPlane};

use crate::dataset::Dataset;
use crate::error::{DataError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhitenMethod {
    /// Divide each image's spectrum by the regularized mean amplitude
    /// spectrum of the training split (after per-channel mean removal).
    Spectral,
    /// Per-image, per-channel zero mean and unit variance.
    Standardize,
    /// Pass-through.
    None,
}

impl WhitenMethod {
    pub fn name(&self) -> &'static str {
        match self {
            WhitenMethod::Spectral => "spectral",
            WhitenMethod::Standardize => "standardize",
            WhitenMethod::None => "none",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(WhitenMethod::Spectral),
            "standardize" => Ok(WhitenMethod::Standardize),
            "none" => Ok(WhitenMethod::None),
            other => Err(DataError::InvalidSpec(format!(
                "unknown whitening method '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WhitenConfig {
    pub method: WhitenMethod,
    /// Spectral regularizer, relative to the mean of the amplitude spectrum;
    /// must be positive for the spectral method.
    pub reg: f64,
}

impl Default for WhitenConfig {
    fn default() -> Self {
        Self {
            method: WhitenMethod::Spectral,
            reg: 0.05,
        }
    }
}

/// Fitted whitening state: the method plus any statistics it needs and the
/// identifier of the batch they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Whitener {
    pub(crate) method: WhitenMethod,
    pub(crate) reg: f64,
    /// Mean amplitude spectrum of the training split (spectral method only).
    pub(crate) mean_amplitude: Option<RealPlane<f64>>,
    pub(crate) stats_source: String,
}

impl Whitener {
    pub fn method(&self) -> WhitenMethod {
        self.method
    }

    pub fn reg(&self) -> f64 {
        self.reg
    }

    pub fn stats_source(&self) -> &str {
        &self.stats_source
    }

    pub fn mean_amplitude(&self) -> Option<&RealPlane<f64>> {
        self.mean_amplitude.as_ref()
    }

    pub fn from_parts(
        method: WhitenMethod,
        reg: f64,
        mean_amplitude: Option<RealPlane<f64>>,
        stats_source: String,
    ) -> Self {
        Self {
            method,
            reg,
            mean_amplitude,
            stats_source,
        }
    }
}

/// Fits whitening statistics on the training split.
pub fn fit_whitener(train: &Dataset, cfg: &WhitenConfig) -> Result<Whitener> {
    if train.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    let mean_amplitude = match cfg.method {
        WhitenMethod::Spectral => {
            if !(cfg.reg > 0.0) {
                return Err(DataError::InvalidSpec(
                    "spectral whitening needs reg > 0".into(),
                ));
            }
            let d = train.image_side();
            let mut acc = RealPlane::<f64>::zeros(d, d);
            let mut count = 0usize;
            for img in train.images() {
                for ch in img.channels() {
                    let spec = dft2(&remove_mean(ch));
                    for (a, z) in acc.as_mut_slice().iter_mut().zip(spec.as_slice()) {
                        *a += z.norm();
                    }
                    count += 1;
                }
            }
            let norm = 1.0 / count as f64;
            Some(acc.map(|v| v * norm))
        }
        _ => None,
    };
    Ok(Whitener {
        method: cfg.method,
        reg: cfg.reg,
        mean_amplitude,
        stats_source: train.source().to_string(),
    })
}

/// Applies fitted whitening to a dataset (which may be the training split
/// itself or a held-out one).
pub fn whiten(ds: &Dataset, whitener: &Whitener) -> Result<Dataset> {
    if ds.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    let images = ds
        .images()
        .iter()
        .map(|img| whiten_image(img, whitener))
        .collect::<Result<Vec<_>>>()?;
    Dataset::from_images(
        images,
        format!(
            "{}#whiten={},stats={}",
            ds.source(),
            whitener.method.name(),
            whitener.stats_source
        ),
    )
}

/// Whitens a single image with already-fitted statistics.
pub fn whiten_one(img: &Image<f64>, whitener: &Whitener) -> Result<Image<f64>> {
    whiten_image(img, whitener)
}

fn whiten_image(img: &Image<f64>, whitener: &Whitener) -> Result<Image<f64>> {
    let channels = img
        .channels()
        .iter()
        .map(|ch| whiten_plane(ch, whitener))
        .collect::<Result<Vec<_>>>()?;
    Ok(Image::new(channels)?)
}

fn whiten_plane(plane: &RealPlane<f64>, whitener: &Whitener) -> Result<RealPlane<f64>> {
    match whitener.method {
        WhitenMethod::None => Ok(plane.clone()),
        WhitenMethod::Standardize => {
            let n = plane.as_slice().len() as f64;
            let mean = plane.as_slice().iter().sum::<f64>() / n;
            let var = plane
                .as_slice()
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                / n;
            let std = var.sqrt();
            if std == 0.0 {
                // Constant plane: mean removal is all that can be done.
                return Ok(plane.map(|v| v - mean));
            }
            Ok(plane.map(|v| (v - mean) / std))
        }
        WhitenMethod::Spectral => {
            let amplitude = whitener
                .mean_amplitude
                .as_ref()
                .ok_or_else(|| DataError::InvalidSpec("spectral whitener has no statistics".into()))?;
            if amplitude.dims() != plane.dims() {
                return Err(DataError::InvalidSpec(format!(
                    "whitener fitted at {:?} applied to {:?}",
                    amplitude.dims(),
                    plane.dims()
                )));
            }
            let mean_level =
                amplitude.as_slice().iter().sum::<f64>() / amplitude.as_slice().len() as f64;
            let guard = whitener.reg * mean_level;
            let spec = dft2(&remove_mean(plane));
            let divisor = ComplexPlane::from_fn(amplitude.rows(), amplitude.cols(), |r, c| {
                num_complex::Complex::new(amplitude[(r, c)], 0.0)
            });
            let flattened = hadamard_div(&spec, &divisor, guard)?;
            let flat = idft2(&flattened)?;
            // Flattening divides by amplitudes of order d, leaving pixel
            // values minuscule; rescale to unit pixel variance so downstream
            // signal scales stay comparable to the raw data.
            let n = flat.as_slice().len() as f64;
            let var = flat.as_slice().iter().map(|v| v * v).sum::<f64>() / n;
            let std = var.sqrt();
            if std == 0.0 {
                return Ok(flat);
            }
            Ok(flat.map(|v| v / std))
        }
    }
}

fn remove_mean(plane: &RealPlane<f64>) -> RealPlane<f64> {
    let mean = plane.as_slice().iter().sum::<f64>() / plane.as_slice().len() as f64;
    plane.map(|v| v - mean)
}
