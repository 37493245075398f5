//! Spatial and spectral evaluation of the training loss.
//!
//! Per sample the loss is `‖r(x) − target‖² + λ·‖penalty image‖²` where the
//! target is the channel sum of the image and the penalty image is the
//! inverse transform of `Σ_k W(k) ⊙ D(k)`. Spectrally the same two terms are
//! `(‖Σ_k W⊙H − X‖² + λ·‖Σ_k W⊙D‖²) / d²`; the `1/d²` accounts for the
//! unnormalized-forward DFT convention so both routes report the same number.

use crate::error::{Error, Result};
use crate::model::{encode, reconstruct_from_encoding, DecoderFilters, EncoderParams, Image};
use crate::plane::{pad_to, ComplexPlane};
use crate::scalar::Scalar;
use crate::spectral::{dft2, hadamard, idft2};
use crate::stats::{SpectralSample, StatsMode, SufficientStats};

/// Per-image mean loss, split into its two Frobenius terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossBreakdown<F> {
    /// Mean squared reconstruction error.
    pub recon: F,
    /// Mean squared contractive penalty (unweighted).
    pub contractive: F,
    /// `recon + lambda · contractive`.
    pub total: F,
    /// Samples averaged over.
    pub n: usize,
    pub lambda: F,
}

impl<F: Scalar> LossBreakdown<F> {
    fn new(recon: F, contractive: F, lambda: F, n: usize) -> Self {
        Self {
            recon,
            contractive,
            total: recon + lambda * contractive,
            n,
            lambda,
        }
    }
}

/// Spectral loss over an explicit list of lifted samples.
pub fn loss_spectral_samples<F: Scalar>(
    samples: &[SpectralSample<F>],
    dec: &DecoderFilters<F>,
    lambda: F,
) -> Result<LossBreakdown<F>> {
    if samples.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let d = dec.grid_side();
    let bins = F::from_usize(d * d).unwrap();
    let mut recon_sum = F::zero();
    let mut contract_sum = F::zero();
    for s in samples {
        crate::plane::check_same_dims("loss grid", (d, d), s.grid_dims())?;
        if s.filter_count() != dec.filter_count() {
            return Err(Error::DimMismatch {
                context: "loss filter count",
                expected: (dec.filter_count(), 1),
                found: (s.filter_count(), 1),
            });
        }
        let mut fit = ComplexPlane::zeros(d, d);
        let mut pen = ComplexPlane::zeros(d, d);
        for k in 0..dec.filter_count() {
            fit.add_assign(&hadamard(&dec.spectral()[k], s.h(k))?)?;
            pen.add_assign(&hadamard(&dec.spectral()[k], s.d(k))?)?;
        }
        recon_sum += fit.sub(s.x())?.sq_norm() / bins;
        contract_sum += pen.sq_norm() / bins;
    }
    let n = F::from_usize(samples.len()).unwrap();
    Ok(LossBreakdown::new(
        recon_sum / n,
        contract_sum / n,
        lambda,
        samples.len(),
    ))
}

/// Spectral loss over exact-mode statistics (which retain per-sample spectra).
pub fn loss_spectral<F: Scalar>(
    stats: &SufficientStats<F>,
    dec: &DecoderFilters<F>,
    lambda: F,
) -> Result<LossBreakdown<F>> {
    if stats.mode() != StatsMode::Exact {
        return Err(Error::ModeMismatch(
            "spectral loss needs per-sample spectra; use exact-mode statistics or a raw batch",
        ));
    }
    loss_spectral_samples(stats.samples(), dec, lambda)
}

/// Spatial-domain loss over a raw batch: reconstruction against the
/// channel-sum target plus the penalty image energy, averaged per image.
pub fn loss_spatial<F: Scalar>(
    batch: &[Image<F>],
    enc: &EncoderParams<F>,
    dec: &DecoderFilters<F>,
    lambda: F,
) -> Result<LossBreakdown<F>> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let d = dec.grid_side();
    let filter_spectra = enc.filter_spectra();
    let mut recon_sum = F::zero();
    let mut contract_sum = F::zero();
    for x in batch {
        let encoding = encode(x, enc)?;
        let r = reconstruct_from_encoding(&encoding, dec)?;
        recon_sum += r.sub(&x.channel_sum())?.sq_norm();

        let mut pen = ComplexPlane::zeros(d, d);
        for k in 0..dec.filter_count() {
            let g = dft2(&pad_to(&encoding.derivmaps[k], (d, d))?);
            let dk = hadamard(&g, &filter_spectra[k])?;
            pen.add_assign(&hadamard(&dec.spectral()[k], &dk)?)?;
        }
        contract_sum += idft2(&pen)?.sq_norm();
    }
    let n = F::from_usize(batch.len()).unwrap();
    Ok(LossBreakdown::new(
        recon_sum / n,
        contract_sum / n,
        lambda,
        batch.len(),
    ))
}

/// Mean per-image squared reconstruction error on a held-out batch
/// (no penalty term).
pub fn reconstruction_error<F: Scalar>(
    batch: &[Image<F>],
    enc: &EncoderParams<F>,
    dec: &DecoderFilters<F>,
) -> Result<F> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut sum = F::zero();
    for x in batch {
        let r = crate::model::reconstruct(x, enc, dec)?;
        sum += r.sub(&x.channel_sum())?.sq_norm();
    }
    Ok(sum / F::from_usize(batch.len()).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{init_encoder, Activation, EncoderParams, ModelDims};
    use crate::plane::RealPlane;
    use crate::solver::{solve, SolverConfig};
    use crate::stats::{absorb, lift_sample, lift_sample_with};
    use approx::assert_abs_diff_eq;

    fn batch(dims: ModelDims, n: usize, salt: usize) -> Vec<Image<f64>> {
        let d = dims.image_side();
        (0..n)
            .map(|i| {
                Image::from_plane(RealPlane::from_fn(d, d, |r, c| {
                    (((r * 3 + c * 7 + i * 5 + salt) % 9) as f64 - 4.0) / 4.0
                }))
            })
            .collect()
    }

    fn stats_for(
        dims: ModelDims,
        enc: &EncoderParams<f64>,
        images: &[Image<f64>],
    ) -> SufficientStats<f64> {
        let mut stats =
            SufficientStats::empty(dims.filter_count(), dims.image_side(), StatsMode::Exact);
        for x in images {
            stats = absorb(stats, lift_sample(x, enc).unwrap()).unwrap();
        }
        stats
    }

    #[test]
    fn zero_filters_loss_is_target_energy() {
        let dims = ModelDims::new(6, 3, 1, 2).unwrap();
        let enc = init_encoder(dims, 2, 0.2, 0.02).unwrap();
        let images = batch(dims, 3, 1);
        let stats = stats_for(dims, &enc, &images);
        let dec = DecoderFilters::zeros(dims);

        let loss = loss_spectral(&stats, &dec, 0.5).unwrap();
        let expected: f64 = images
            .iter()
            .map(|x| x.channel_sum().sq_norm())
            .sum::<f64>()
            / 3.0;
        assert_abs_diff_eq!(loss.recon, expected, epsilon = 1e-9);
        assert_abs_diff_eq!(loss.contractive, 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(loss.total, loss.recon, epsilon = 1e-12);
    }

    #[test]
    fn lambda_zero_total_equals_recon() {
        let dims = ModelDims::new(6, 3, 1, 2).unwrap();
        let enc = init_encoder(dims, 4, 0.2, 0.02).unwrap();
        let images = batch(dims, 2, 3);
        let stats = stats_for(dims, &enc, &images);
        let cfg = SolverConfig {
            lambda: 0.8,
            cycles: 3,
            ..SolverConfig::default()
        };
        let (dec, _) = solve(&stats, &dims, &cfg).unwrap();
        let loss = loss_spectral(&stats, &dec, 0.0).unwrap();
        assert_abs_diff_eq!(loss.total, loss.recon, epsilon = 0.0);
    }

    #[test]
    fn spatial_equals_spectral() {
        let dims = ModelDims::new(8, 3, 1, 3).unwrap();
        let enc = init_encoder(dims, 6, 0.25, 0.03).unwrap();
        let images = batch(dims, 4, 7);
        let stats = stats_for(dims, &enc, &images);
        let cfg = SolverConfig {
            lambda: 2.0,
            cycles: 4,
            ..SolverConfig::default()
        };
        let (dec, _) = solve(&stats, &dims, &cfg).unwrap();

        let spatial = loss_spatial(&images, &enc, &dec, 2.0).unwrap();
        let spectral = loss_spectral(&stats, &dec, 2.0).unwrap();
        assert_abs_diff_eq!(
            spatial.recon,
            spectral.recon,
            epsilon = 1e-10 * spectral.recon.max(1.0)
        );
        assert_abs_diff_eq!(
            spatial.contractive,
            spectral.contractive,
            epsilon = 1e-10 * spectral.contractive.max(1.0)
        );
        assert_abs_diff_eq!(
            spatial.total,
            spectral.total,
            epsilon = 1e-10 * spectral.total.max(1.0)
        );
    }

    #[test]
    fn fabricated_perfect_reconstruction_has_zero_recon() {
        // Zero encoding filters make the maps bias-only, hence independent of
        // the input; feeding the model's own output back as the image then
        // reconstructs it exactly.
        let dims = ModelDims::new(5, 2, 1, 2).unwrap();
        let enc = EncoderParams::from_parts(
            dims,
            vec![RealPlane::zeros(2, 2); 2],
            vec![
                RealPlane::from_fn(4, 4, |r, c| ((r + c) as f64) / 5.0 - 0.3),
                RealPlane::from_fn(4, 4, |r, c| ((r * c) as f64) / 7.0 - 0.2),
            ],
        )
        .unwrap();
        let dec = DecoderFilters::from_spectral(
            (0..2)
                .map(|k| dft2(&RealPlane::from_fn(5, 5, |r, c| ((r * 2 + c + k) % 4) as f64 / 3.0)))
                .collect(),
        )
        .unwrap();
        let any = Image::from_plane(RealPlane::zeros(5, 5));
        let r0 = crate::model::reconstruct(&any, &enc, &dec).unwrap();
        let loss = loss_spatial(&[Image::from_plane(r0)], &enc, &dec, 1.0).unwrap();
        assert_abs_diff_eq!(loss.recon, 0.0, epsilon = 1e-18);
        // Zero encoding filters also zero out A, through which the penalty acts.
        assert_abs_diff_eq!(loss.contractive, 0.0, epsilon = 1e-18);
    }

    #[test]
    fn zero_image_batch_loss() {
        let dims = ModelDims::new(5, 2, 1, 2).unwrap();
        let enc = EncoderParams::from_parts(
            dims,
            vec![
                RealPlane::from_fn(2, 2, |r, c| (r + c) as f64 / 3.0),
                RealPlane::from_fn(2, 2, |r, c| (r as f64 - c as f64) / 2.0),
            ],
            vec![RealPlane::zeros(4, 4); 2],
        )
        .unwrap();
        let dec = DecoderFilters::from_spectral(
            (0..2)
                .map(|k| dft2(&RealPlane::from_fn(5, 5, |r, c| ((r + c * 2 + k) % 3) as f64)))
                .collect(),
        )
        .unwrap();
        let zero = Image::from_plane(RealPlane::zeros(5, 5));
        let loss = loss_spatial(&[zero.clone()], &enc, &dec, 1.0).unwrap();
        // tanh(0) = 0 wipes the maps, so both r and the target vanish.
        assert_abs_diff_eq!(loss.recon, 0.0, epsilon = 1e-20);

        // The contractive term survives and equals the D ⊙ W energy.
        let s = lift_sample(&zero, &enc).unwrap();
        let mut pen = ComplexPlane::zeros(5, 5);
        for k in 0..2 {
            pen.add_assign(&hadamard(&dec.spectral()[k], s.d(k)).unwrap()).unwrap();
        }
        assert_abs_diff_eq!(loss.contractive, pen.sq_norm() / 25.0, epsilon = 1e-9);
    }

    #[test]
    fn linear_activation_makes_penalty_image_independent() {
        let dims = ModelDims::new(6, 3, 1, 2).unwrap();
        let enc = init_encoder(dims, 8, 0.2, 0.02).unwrap();
        let images = batch(dims, 2, 11);
        let s0 = lift_sample_with(&images[0], &enc, Activation::Linear).unwrap();
        let s1 = lift_sample_with(&images[1], &enc, Activation::Linear).unwrap();
        for k in 0..2 {
            for (a, b) in s0.d(k).as_slice().iter().zip(s1.d(k).as_slice()) {
                assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
                assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn empty_batch_is_rejected() {
        let dims = ModelDims::new(4, 2, 1, 1).unwrap();
        let enc = init_encoder(dims, 1, 0.1, 0.01).unwrap();
        let dec = DecoderFilters::zeros(dims);
        assert!(matches!(
            loss_spatial::<f64>(&[], &enc, &dec, 1.0),
            Err(Error::EmptyBatch)
        ));
        assert!(matches!(
            reconstruction_error::<f64>(&[], &enc, &dec),
            Err(Error::EmptyBatch)
        ));
    }

    #[test]
    fn trained_model_beats_zero_filters_on_seen_image() {
        let dims = ModelDims::new(4, 1, 1, 16).unwrap();
        let enc = init_encoder(dims, 12, 0.5, 0.1).unwrap();
        let images = batch(dims, 1, 13);
        let stats = stats_for(dims, &enc, &images);
        let cfg = SolverConfig {
            lambda: 1e-9,
            cycles: 200,
            ..SolverConfig::default()
        };
        let (dec, _) = solve(&stats, &dims, &cfg).unwrap();
        let trained = reconstruction_error(&images, &enc, &dec).unwrap();
        let baseline = reconstruction_error(&images, &enc, &DecoderFilters::zeros(dims)).unwrap();
        assert!(
            trained < baseline,
            "trained {trained} not below baseline {baseline}"
        );
    }
}
