//! Binary containers for models, statistics snapshots and whitening state.
//!
//! All files are little-endian with a 4-byte magic and a u32 format version.
//! Planes are stored as row-major f64 runs; complex planes store the full
//! real plane first, then the full imaginary plane. Round trips are
//! bit-lossless. Exact layouts are documented in the repository README.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex;
use rcae_core::{
    ComplexPlane, DecoderFilters, ModelDims, RealPlane, SpectralSample, StatsMode,
    SufficientStats,
};

use crate::error::{DataError, Result};
use crate::whiten::{WhitenMethod, Whitener};

const MODEL_MAGIC: &[u8; 4] = b"RCAE";
const STATS_MAGIC: &[u8; 4] = b"RCST";
const WHITEN_MAGIC: &[u8; 4] = b"RCWH";
const VERSION: u32 = 1;

/// A trained model: everything needed to rebuild the frozen encoder (from
/// its seed) plus the learned spectral decoding filters.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub dims: ModelDims,
    pub seed: u64,
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub lambda: f64,
    pub filters: DecoderFilters<f64>,
}

fn bad(path: &Path, reason: impl Into<String>) -> DataError {
    DataError::Format {
        path: path.into(),
        reason: reason.into(),
    }
}

fn write_complex_plane<W: Write>(w: &mut W, plane: &ComplexPlane<f64>) -> Result<()> {
    for z in plane.as_slice() {
        w.write_f64::<LittleEndian>(z.re)?;
    }
    for z in plane.as_slice() {
        w.write_f64::<LittleEndian>(z.im)?;
    }
    Ok(())
}

fn read_complex_plane<R: Read>(r: &mut R, rows: usize, cols: usize) -> Result<ComplexPlane<f64>> {
    let n = rows * cols;
    let mut re = vec![0.0f64; n];
    let mut im = vec![0.0f64; n];
    r.read_f64_into::<LittleEndian>(&mut re)?;
    r.read_f64_into::<LittleEndian>(&mut im)?;
    let data = re
        .into_iter()
        .zip(im)
        .map(|(a, b)| Complex::new(a, b))
        .collect();
    Ok(ComplexPlane::from_vec(rows, cols, data).map_err(rcae_core::Error::from)?)
}

fn write_real_plane<W: Write>(w: &mut W, plane: &RealPlane<f64>) -> Result<()> {
    for v in plane.as_slice() {
        w.write_f64::<LittleEndian>(*v)?;
    }
    Ok(())
}

fn read_real_plane<R: Read>(r: &mut R, rows: usize, cols: usize) -> Result<RealPlane<f64>> {
    let mut data = vec![0.0f64; rows * cols];
    r.read_f64_into::<LittleEndian>(&mut data)?;
    Ok(RealPlane::from_vec(rows, cols, data).map_err(rcae_core::Error::from)?)
}

fn check_header<R: Read>(r: &mut R, path: &Path, magic: &[u8; 4]) -> Result<()> {
    let mut got = [0u8; 4];
    r.read_exact(&mut got)?;
    if &got != magic {
        return Err(bad(path, format!("bad magic {got:?}")));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(bad(path, format!("unsupported version {version}")));
    }
    Ok(())
}

fn write_dims<W: Write>(w: &mut W, dims: &ModelDims) -> Result<()> {
    w.write_u32::<LittleEndian>(dims.image_side() as u32)?;
    w.write_u32::<LittleEndian>(dims.filter_side() as u32)?;
    w.write_u32::<LittleEndian>(dims.channels() as u32)?;
    w.write_u32::<LittleEndian>(dims.filter_count() as u32)?;
    Ok(())
}

fn read_dims<R: Read>(r: &mut R, path: &Path) -> Result<ModelDims> {
    let d = r.read_u32::<LittleEndian>()? as usize;
    let w = r.read_u32::<LittleEndian>()? as usize;
    let c = r.read_u32::<LittleEndian>()? as usize;
    let k = r.read_u32::<LittleEndian>()? as usize;
    ModelDims::new(d, w, c, k).map_err(|e| bad(path, e.to_string()))
}

/// Layout: magic "RCAE", version, dims (d,w,C,K as u32), seed u64,
/// sigma_a, sigma_b, lambda as f64, then K spectral planes.
pub fn save_checkpoint(ckpt: &Checkpoint, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(MODEL_MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    write_dims(&mut w, &ckpt.dims)?;
    w.write_u64::<LittleEndian>(ckpt.seed)?;
    w.write_f64::<LittleEndian>(ckpt.sigma_a)?;
    w.write_f64::<LittleEndian>(ckpt.sigma_b)?;
    w.write_f64::<LittleEndian>(ckpt.lambda)?;
    if ckpt.filters.filter_count() != ckpt.dims.filter_count()
        || ckpt.filters.grid_side() != ckpt.dims.image_side()
    {
        return Err(bad(path, "filters do not match model dimensions"));
    }
    for plane in ckpt.filters.spectral() {
        write_complex_plane(&mut w, plane)?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Checkpoint> {
    let path = path.as_ref();
    let mut r = BufReader::new(
        std::fs::File::open(path).map_err(|_| DataError::UnreadablePath(path.into()))?,
    );
    check_header(&mut r, path, MODEL_MAGIC)?;
    let dims = read_dims(&mut r, path)?;
    let seed = r.read_u64::<LittleEndian>()?;
    let sigma_a = r.read_f64::<LittleEndian>()?;
    let sigma_b = r.read_f64::<LittleEndian>()?;
    let lambda = r.read_f64::<LittleEndian>()?;
    let d = dims.image_side();
    let planes = (0..dims.filter_count())
        .map(|_| read_complex_plane(&mut r, d, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(Checkpoint {
        dims,
        seed,
        sigma_a,
        sigma_b,
        lambda,
        filters: DecoderFilters::from_spectral(planes).map_err(|e| bad(path, e.to_string()))?,
    })
}

fn write_sample<W: Write>(w: &mut W, s: &SpectralSample<f64>) -> Result<()> {
    for k in 0..s.filter_count() {
        write_complex_plane(w, s.h(k))?;
    }
    write_complex_plane(w, s.x())?;
    for k in 0..s.filter_count() {
        write_complex_plane(w, s.d(k))?;
    }
    Ok(())
}

fn read_sample<R: Read>(r: &mut R, k: usize, d: usize) -> Result<SpectralSample<f64>> {
    let h = (0..k)
        .map(|_| read_complex_plane(r, d, d))
        .collect::<Result<Vec<_>>>()?;
    let x = read_complex_plane(r, d, d)?;
    let dd = (0..k)
        .map(|_| read_complex_plane(r, d, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralSample::from_parts(h, x, dd).map_err(rcae_core::Error::from)?)
}

/// Layout: magic "RCST", version, dims, mode u8 (0 literal / 1 exact),
/// n_seen u64, the summed planes (K×H, X, K×D), then per-sample spectra in
/// exact mode. Lets ingestion and solving run as separate invocations.
pub fn save_stats(
    stats: &SufficientStats<f64>,
    dims: &ModelDims,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(STATS_MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    write_dims(&mut w, dims)?;
    w.write_u8(match stats.mode() {
        StatsMode::Literal => 0,
        StatsMode::Exact => 1,
    })?;
    w.write_u64::<LittleEndian>(stats.n_seen() as u64)?;
    for k in 0..stats.filter_count() {
        write_complex_plane(&mut w, stats.h_sum(k))?;
    }
    write_complex_plane(&mut w, stats.x_sum())?;
    for k in 0..stats.filter_count() {
        write_complex_plane(&mut w, stats.d_sum(k))?;
    }
    for s in stats.samples() {
        write_sample(&mut w, s)?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_stats(path: impl AsRef<Path>) -> Result<(SufficientStats<f64>, ModelDims)> {
    let path = path.as_ref();
    let mut r = BufReader::new(
        std::fs::File::open(path).map_err(|_| DataError::UnreadablePath(path.into()))?,
    );
    check_header(&mut r, path, STATS_MAGIC)?;
    let dims = read_dims(&mut r, path)?;
    let mode = match r.read_u8()? {
        0 => StatsMode::Literal,
        1 => StatsMode::Exact,
        other => return Err(bad(path, format!("unknown stats mode {other}"))),
    };
    let n_seen = r.read_u64::<LittleEndian>()? as usize;
    let k = dims.filter_count();
    let d = dims.image_side();
    let h_sum = (0..k)
        .map(|_| read_complex_plane(&mut r, d, d))
        .collect::<Result<Vec<_>>>()?;
    let x_sum = read_complex_plane(&mut r, d, d)?;
    let d_sum = (0..k)
        .map(|_| read_complex_plane(&mut r, d, d))
        .collect::<Result<Vec<_>>>()?;
    let samples = match mode {
        StatsMode::Literal => Vec::new(),
        StatsMode::Exact => (0..n_seen)
            .map(|_| read_sample(&mut r, k, d))
            .collect::<Result<Vec<_>>>()?,
    };
    let stats = SufficientStats::from_parts(h_sum, x_sum, d_sum, n_seen, mode, samples)
        .map_err(|e| bad(path, e.to_string()))?;
    Ok((stats, dims))
}

/// Layout: magic "RCWH", version, method u8 (0 none / 1 standardize /
/// 2 spectral), reg f64, spectrum dims as u32 pair (0,0 when absent),
/// spectrum f64s, then the stats-source string (u32 length + UTF-8).
pub fn save_whitener(whitener: &Whitener, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(WHITEN_MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u8(match whitener.method() {
        WhitenMethod::None => 0,
        WhitenMethod::Standardize => 1,
        WhitenMethod::Spectral => 2,
    })?;
    w.write_f64::<LittleEndian>(whitener.reg())?;
    match whitener.mean_amplitude() {
        Some(plane) => {
            let (rows, cols) = plane.dims();
            w.write_u32::<LittleEndian>(rows as u32)?;
            w.write_u32::<LittleEndian>(cols as u32)?;
            write_real_plane(&mut w, plane)?;
        }
        None => {
            w.write_u32::<LittleEndian>(0)?;
            w.write_u32::<LittleEndian>(0)?;
        }
    }
    let src = whitener.stats_source().as_bytes();
    w.write_u32::<LittleEndian>(src.len() as u32)?;
    w.write_all(src)?;
    w.flush()?;
    Ok(())
}

pub fn load_whitener(path: impl AsRef<Path>) -> Result<Whitener> {
    let path = path.as_ref();
    let mut r = BufReader::new(
        std::fs::File::open(path).map_err(|_| DataError::UnreadablePath(path.into()))?,
    );
    check_header(&mut r, path, WHITEN_MAGIC)?;
    let method = match r.read_u8()? {
        0 => WhitenMethod::None,
        1 => WhitenMethod::Standardize,
        2 => WhitenMethod::Spectral,
        other => return Err(bad(path, format!("unknown whitening method {other}"))),
    };
    let reg = r.read_f64::<LittleEndian>()?;
    let rows = r.read_u32::<LittleEndian>()? as usize;
    let cols = r.read_u32::<LittleEndian>()? as usize;
    let mean_amplitude = if rows > 0 && cols > 0 {
        Some(read_real_plane(&mut r, rows, cols)?)
    } else {
        None
    };
    let len = r.read_u32::<LittleEndian>()? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    let source = String::from_utf8(buf).map_err(|e| bad(path, e.to_string()))?;
    Ok(Whitener::from_parts(method, reg, mean_amplitude, source))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rcae_core::dft2;

    fn toy_checkpoint() -> Checkpoint {
        let dims = ModelDims::new(6, 3, 1, 2).unwrap();
        let filters = DecoderFilters::from_spectral(
            (0..2)
                .map(|k| {
                    dft2(&RealPlane::from_fn(6, 6, |r, c| {
                        ((r * 3 + c * 7 + k) % 5) as f64 / 3.0 - 0.5
                    }))
                })
                .collect(),
        )
        .unwrap();
        Checkpoint {
            dims,
            seed: 0xDEADBEEF,
            sigma_a: 0.1,
            sigma_b: 0.01,
            lambda: 16.5,
            filters,
        }
    }

    #[test]
    fn checkpoint_round_trip_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.rcae");
        let ckpt = toy_checkpoint();
        save_checkpoint(&ckpt, &path).unwrap();
        let back = load_checkpoint(&path).unwrap();
        assert_eq!(back.dims, ckpt.dims);
        assert_eq!(back.seed, ckpt.seed);
        assert_eq!(back.lambda.to_bits(), ckpt.lambda.to_bits());
        for k in 0..2 {
            let a = ckpt.filters.spectral()[k].as_slice();
            let b = back.filters.spectral()[k].as_slice();
            assert!(a
                .iter()
                .zip(b)
                .all(|(x, y)| x.re.to_bits() == y.re.to_bits()
                    && x.im.to_bits() == y.im.to_bits()));
        }
    }

    #[test]
    fn corrupted_magic_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.rcae");
        std::fs::write(&path, b"NOPE0000").unwrap();
        assert!(matches!(
            load_checkpoint(&path),
            Err(DataError::Format { .. })
        ));
    }

    #[test]
    fn stats_snapshot_round_trip() {
        use rcae_core::{absorb, init_encoder, lift_sample, Image};
        let dims = ModelDims::new(5, 2, 1, 2).unwrap();
        let enc = init_encoder(dims, 3, 0.2, 0.05).unwrap();
        for mode in [StatsMode::Literal, StatsMode::Exact] {
            let mut stats = SufficientStats::empty(2, 5, mode);
            for i in 0..3 {
                let img = Image::from_plane(RealPlane::from_fn(5, 5, |r, c| {
                    ((r * 2 + c * 3 + i) % 7) as f64 / 7.0
                }));
                stats = absorb(stats, lift_sample(&img, &enc).unwrap()).unwrap();
            }
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("stats.rcst");
            save_stats(&stats, &dims, &path).unwrap();
            let (back, back_dims) = load_stats(&path).unwrap();
            assert_eq!(back_dims, dims);
            assert_eq!(back, stats);
        }
    }

    #[test]
    fn whitener_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.rcwh");
        let wh = Whitener::from_parts(
            WhitenMethod::Spectral,
            0.05,
            Some(RealPlane::from_fn(4, 4, |r, c| (r + c) as f64 + 0.25)),
            "train-dir".into(),
        );
        save_whitener(&wh, &path).unwrap();
        assert_eq!(load_whitener(&path).unwrap(), wh);
    }
}
