//! Feature-map extraction with the learned decoding filters.

use std::path::Path;

use rcae_core::{infer_features, FilterSupport, InferOptions, TransposeMode};
use rcae_data::{save_tile_grid, GridLayout};

use crate::commands::reconstruct::prepare_input;
use crate::error::{CliError, Result};

pub fn parse_transpose(s: &str) -> Result<TransposeMode> {
    match s {
        "matrix" => Ok(TransposeMode::MatrixTranspose),
        "rot180" => Ok(TransposeMode::Rot180),
        other => Err(CliError::Config(format!("unknown transpose mode '{other}'"))),
    }
}

pub fn run_encode(
    ckpt_path: &Path,
    image_path: &Path,
    out: &Path,
    transpose: TransposeMode,
    full_support: bool,
    skip_whiten: bool,
) -> Result<()> {
    let (ckpt, img) = prepare_input(ckpt_path, image_path, skip_whiten)?;
    let opts = InferOptions {
        activation_is_linear: false,
        transpose,
        support: if full_support {
            FilterSupport::Full
        } else {
            FilterSupport::Cropped(ckpt.dims.filter_side())
        },
    };
    let maps = infer_features(&img, &ckpt.filters, opts)?;
    let (rows, cols) = maps[0].dims();
    save_tile_grid(&maps, out, GridLayout::default())?;
    println!(
        "{} feature maps of {rows}×{cols} written to {}",
        maps.len(),
        out.display()
    );
    Ok(())
}
