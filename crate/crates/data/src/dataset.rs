//! Image-directory ingestion: decode, center-crop, resample, scale to [0,1].

use std::path::{Path, PathBuf};

use rcae_core::{Image, RealPlane};

use crate::error::{DataError, Result};

/// An ordered collection of equally sized `C`-channel images plus the
/// provenance string that identifies where it came from.
#[derive(Clone, Debug)]
pub struct Dataset {
    images: Vec<Image<f64>>,
    source: String,
    d: usize,
    c: usize,
}

impl Dataset {
    pub fn from_images(images: Vec<Image<f64>>, source: impl Into<String>) -> Result<Self> {
        let first = images.first().ok_or(DataError::EmptyDataset)?;
        let (d, _) = first.dims();
        let c = first.channel_count();
        for img in &images {
            if img.dims() != (d, d) || img.channel_count() != c {
                return Err(DataError::InvalidSpec(
                    "all images in a dataset must share dimensions and channel count".into(),
                ));
            }
        }
        Ok(Self {
            images,
            source: source.into(),
            d,
            c,
        })
    }

    pub fn images(&self) -> &[Image<f64>] {
        &self.images
    }

    pub fn into_images(self) -> Vec<Image<f64>> {
        self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn image_side(&self) -> usize {
        self.d
    }

    pub fn channels(&self) -> usize {
        self.c
    }

    /// First `n` images as a new dataset (provenance annotated).
    pub fn take(&self, n: usize) -> Result<Self> {
        Dataset::from_images(
            self.images.iter().take(n).cloned().collect(),
            format!("{}#take={n}", self.source),
        )
    }
}

/// Loads every decodable `*.pgm`, `*.ppm`, `*.pnm`, `*.png` under `path`
/// (sorted by filename), center-crops each to a square, resamples to
/// `d × d` by area averaging, and scales pixel values to `[0, 1]`.
///
/// Files that fail to decode are skipped with a warning; an empty result is
/// an error. `limit` keeps only the lexicographically first images.
pub fn load_dataset(
    path: impl AsRef<Path>,
    d: usize,
    channels: usize,
    limit: Option<usize>,
) -> Result<Dataset> {
    let path = path.as_ref();
    let entries = std::fs::read_dir(path).map_err(|_| DataError::UnreadablePath(path.into()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .map(|e| {
                    matches!(
                        e.to_ascii_lowercase().as_str(),
                        "pgm" | "ppm" | "pnm" | "png"
                    )
                })
                .unwrap_or(false)
        })
        .collect();
    files.sort_by_key(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()));
    if let Some(limit) = limit {
        files.truncate(limit);
    }

    let mut images = Vec::new();
    for file in &files {
        match load_image_file(file, d, channels) {
            Ok(img) => images.push(img),
            Err(err @ DataError::DimUnderflow { .. }) => return Err(err),
            Err(err) => log::warn!("skipping {}: {err}", file.display()),
        }
    }
    if images.is_empty() {
        return Err(DataError::NoImages(path.into()));
    }
    Dataset::from_images(images, path.display().to_string())
}

/// Decodes a single image file through the same crop/resample pipeline.
pub fn load_image_file(path: impl AsRef<Path>, d: usize, channels: usize) -> Result<Image<f64>> {
    let path = path.as_ref();
    let decoded = image::open(path).map_err(|e| DataError::DecodeFailure {
        path: path.into(),
        reason: e.to_string(),
    })?;
    // 16-bit normalization: 8-bit sources are scaled by 257, so v/65535
    // reproduces v/255 exactly.
    let rgb = decoded.to_rgb16();
    let (width, height) = (rgb.width() as usize, rgb.height() as usize);
    let side = width.min(height);
    if side < d {
        return Err(DataError::DimUnderflow {
            path: path.into(),
            source_dims: (height, width),
            target: d,
        });
    }
    let (off_r, off_c) = ((height - side) / 2, (width - side) / 2);

    let channel_plane = |ch: usize| {
        RealPlane::from_fn(side, side, |r, c| {
            rgb.get_pixel((off_c + c) as u32, (off_r + r) as u32).0[ch] as f64 / 65535.0
        })
    };
    let planes: Vec<RealPlane<f64>> = match channels {
        1 => {
            let (r, g, b) = (channel_plane(0), channel_plane(1), channel_plane(2));
            vec![RealPlane::from_fn(side, side, |i, j| {
                0.299 * r[(i, j)] + 0.587 * g[(i, j)] + 0.114 * b[(i, j)]
            })]
        }
        3 => vec![channel_plane(0), channel_plane(1), channel_plane(2)],
        other => {
            return Err(DataError::InvalidSpec(format!(
                "unsupported channel count {other} (use 1 or 3)"
            )))
        }
    };
    let resampled = planes
        .into_iter()
        .map(|p| resample_area(&p, d))
        .collect::<Vec<_>>();
    Ok(Image::new(resampled)?)
}

/// Area-weighted downsampling of a square plane to `d × d`. Each output
/// pixel averages the input rectangle it covers, with fractional edge
/// weights, so the result is independent of traversal order.
fn resample_area(plane: &RealPlane<f64>, d: usize) -> RealPlane<f64> {
    let (s, _) = plane.dims();
    if s == d {
        return plane.clone();
    }
    let scale = s as f64 / d as f64;
    let span = |i: usize| -> (f64, f64) { (i as f64 * scale, (i + 1) as f64 * scale) };
    RealPlane::from_fn(d, d, |r, c| {
        let (r0, r1) = span(r);
        let (c0, c1) = span(c);
        let mut acc = 0.0;
        let mut area = 0.0;
        let mut row = r0.floor() as usize;
        while (row as f64) < r1 && row < s {
            let wr = (r1.min((row + 1) as f64) - r0.max(row as f64)).max(0.0);
            let mut col = c0.floor() as usize;
            while (col as f64) < c1 && col < s {
                let wc = (c1.min((col + 1) as f64) - c0.max(col as f64)).max(0.0);
                acc += plane[(row, col)] * wr * wc;
                area += wr * wc;
                col += 1;
            }
            row += 1;
        }
        acc / area
    })
}
