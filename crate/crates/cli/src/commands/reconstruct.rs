//! Reconstruction of a single image through a trained checkpoint.

use std::path::Path;

use rcae_core::{init_encoder, reconstruct, Image};
use rcae_data::{load_checkpoint, load_image_file, load_whitener, save_side_by_side_pgm, whiten_one, Checkpoint};

use crate::error::Result;
use crate::meta::sidecar;

/// Loads the checkpoint plus its whitening sidecar (if present) and runs the
/// input image through the same preprocessing the training run used.
pub fn prepare_input(
    ckpt_path: &Path,
    image_path: &Path,
    skip_whiten: bool,
) -> Result<(Checkpoint, Image<f64>)> {
    let ckpt = load_checkpoint(ckpt_path)?;
    let mut img = load_image_file(
        image_path,
        ckpt.dims.image_side(),
        ckpt.dims.channels(),
    )?;
    let whitener_path = sidecar(ckpt_path, "whiten");
    if !skip_whiten && whitener_path.exists() {
        let whitener = load_whitener(&whitener_path)?;
        img = whiten_one(&img, &whitener)?;
    }
    Ok((ckpt, img))
}

pub fn run_reconstruct(
    ckpt_path: &Path,
    image_path: &Path,
    out: &Path,
    skip_whiten: bool,
) -> Result<()> {
    let (ckpt, img) = prepare_input(ckpt_path, image_path, skip_whiten)?;
    let enc = init_encoder(ckpt.dims, ckpt.seed, ckpt.sigma_a, ckpt.sigma_b)?;
    let recon = reconstruct(&img, &enc, &ckpt.filters)?;
    let target = img.channel_sum();
    let err = recon.sub(&target)?.sq_norm();
    save_side_by_side_pgm(&target, &recon, out)?;
    println!("reconstruction error ‖r − x‖² = {err:.6e}");
    println!("side-by-side image written to {}", out.display());
    Ok(())
}
