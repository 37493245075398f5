//! Grayscale PGM output: single planes, dataset dumps and filter tile grids.

use std::path::{Path, PathBuf};

use rcae_core::{DecoderFilters, RealPlane};

use crate::dataset::Dataset;
use crate::error::Result;
use crate::metrics::{export_metrics, Value};

/// Which spatial window of each decoder filter is exported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterCrop {
    /// Full `d × d` support as learned.
    Full,
    /// Canonical top-left `w × w` window.
    Window(usize),
}

/// Tile-grid layout; unspecified sides are derived (square-ish by default).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GridLayout {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
}

impl GridLayout {
    fn resolve(&self, tiles: usize) -> (usize, usize) {
        match (self.rows, self.cols) {
            (Some(r), Some(c)) => (r, c),
            (Some(r), None) => (r, tiles.div_ceil(r)),
            (None, Some(c)) => (tiles.div_ceil(c), c),
            (None, None) => {
                let cols = (tiles as f64).sqrt().ceil() as usize;
                (tiles.div_ceil(cols.max(1)), cols.max(1))
            }
        }
    }
}

fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Min-max normalization to [0, 1]; a constant plane maps to mid-gray 0.5.
fn normalize_tile(plane: &RealPlane<f64>) -> RealPlane<f64> {
    let lo = plane.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = plane
        .as_slice()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        plane.map(|v| (v - lo) / (hi - lo))
    } else {
        plane.map(|_| 0.5)
    }
}

/// Writes one plane as a binary PGM, min-max normalized.
pub fn save_plane_pgm(plane: &RealPlane<f64>, path: impl AsRef<Path>) -> Result<()> {
    let norm = normalize_tile(plane);
    let (rows, cols) = norm.dims();
    let bytes: Vec<u8> = norm.as_slice().iter().map(|&v| quantize(v)).collect();
    image::save_buffer_with_format(
        path.as_ref(),
        &bytes,
        cols as u32,
        rows as u32,
        image::ExtendedColorType::L8,
        image::ImageFormat::Pnm,
    )
    .map_err(|e| crate::error::DataError::Format {
        path: path.as_ref().into(),
        reason: e.to_string(),
    })?;
    Ok(())
}

/// Writes two planes side by side (1-pixel gutter), jointly normalized so
/// gray levels are comparable between the panels.
pub fn save_side_by_side_pgm(
    left: &RealPlane<f64>,
    right: &RealPlane<f64>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let lo = left
        .as_slice()
        .iter()
        .chain(right.as_slice())
        .copied()
        .fold(f64::INFINITY, f64::min);
    let hi = left
        .as_slice()
        .iter()
        .chain(right.as_slice())
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = if hi > lo { hi - lo } else { 1.0 };
    let (lr, lc) = left.dims();
    let (rr, rc) = right.dims();
    let rows = lr.max(rr);
    let cols = lc + 1 + rc;
    let mut bytes = vec![0u8; rows * cols];
    for r in 0..lr {
        for c in 0..lc {
            bytes[r * cols + c] = quantize((left[(r, c)] - lo) / scale);
        }
    }
    for r in 0..rr {
        for c in 0..rc {
            bytes[r * cols + lc + 1 + c] = quantize((right[(r, c)] - lo) / scale);
        }
    }
    image::save_buffer_with_format(
        path.as_ref(),
        &bytes,
        cols as u32,
        rows as u32,
        image::ExtendedColorType::L8,
        image::ImageFormat::Pnm,
    )
    .map_err(|e| crate::error::DataError::Format {
        path: path.as_ref().into(),
        reason: e.to_string(),
    })?;
    Ok(())
}

/// Dumps a dataset as `image_0000.pgm`, ... (channel sums, min-max per image).
pub fn write_dataset_pgm(ds: &Dataset, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir.as_ref())?;
    let mut paths = Vec::with_capacity(ds.len());
    for (i, img) in ds.images().iter().enumerate() {
        let path = dir.as_ref().join(format!("image_{i:04}.pgm"));
        save_plane_pgm(&img.channel_sum(), &path)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Writes a list of equally sized planes as one PGM tile grid (1-pixel
/// gutters, each tile min-max normalized independently).
pub fn save_tile_grid(
    tiles: &[RealPlane<f64>],
    path: impl AsRef<Path>,
    layout: GridLayout,
) -> Result<()> {
    let k = tiles.len();
    let (rows, cols) = layout.resolve(k);
    let (tr, tc) = tiles[0].dims();
    let grid_rows = rows * tr + rows.saturating_sub(1);
    let grid_cols = cols * tc + cols.saturating_sub(1);
    let mut bytes = vec![0u8; grid_rows * grid_cols];
    for (idx, tile) in tiles.iter().enumerate() {
        let norm = normalize_tile(tile);
        let gr = (idx / cols) * (tr + 1);
        let gc = (idx % cols) * (tc + 1);
        for r in 0..tr {
            for c in 0..tc {
                bytes[(gr + r) * grid_cols + gc + c] = quantize(norm[(r, c)]);
            }
        }
    }
    image::save_buffer_with_format(
        path.as_ref(),
        &bytes,
        grid_cols as u32,
        grid_rows as u32,
        image::ExtendedColorType::L8,
        image::ImageFormat::Pnm,
    )
    .map_err(|e| crate::error::DataError::Format {
        path: path.as_ref().into(),
        reason: e.to_string(),
    })?;
    Ok(())
}

/// Exports the spatial filters of `dec` as one PGM tile grid (1-pixel
/// gutters, each tile min-max normalized independently) plus a sidecar CSV
/// `<path>.norms.csv` of per-filter L2 norms over the full spatial support.
///
/// Returns the sidecar path.
pub fn export_filters(
    dec: &DecoderFilters<f64>,
    path: impl AsRef<Path>,
    layout: GridLayout,
    crop: FilterCrop,
) -> Result<PathBuf> {
    let full = dec.spatial()?;
    let tiles: Vec<RealPlane<f64>> = match crop {
        FilterCrop::Full => full.clone(),
        FilterCrop::Window(w) => dec.spatial_cropped(w)?,
    };
    save_tile_grid(&tiles, path.as_ref(), layout)?;

    let norms_path = sidecar_path(path.as_ref(), "norms.csv");
    let rows: Vec<Vec<Value>> = full
        .iter()
        .enumerate()
        .map(|(i, f)| vec![Value::Int(i as i64), Value::Float(f.sq_norm().sqrt())])
        .collect();
    export_metrics(&["filter", "l2_norm"], &rows, &norms_path)?;
    Ok(norms_path)
}

pub(crate) fn sidecar_path(path: &Path, suffix: &str) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".");
    os.push(suffix);
    PathBuf::from(os)
}
