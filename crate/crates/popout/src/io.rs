//! File formats: PNG images and masks, fixation CSV, atomic writes.

use std::fs;
use std::io::{BufReader, Write};
use std::path::Path;

use popout_core::gaze::{validate_records, FixationRecord};
use popout_core::raster::AoiMask;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const FIXATION_HEADER: [&str; 7] = ["participant", "stimulus", "index", "x_px", "y_px", "onset_ms", "duration_ms"];

/// Write through a temporary sibling and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let res = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(bytes)?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = res {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

fn encode_png(width: usize, height: usize, color: png::ColorType, data: &[u8], path: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut buf, width as u32, height as u32);
        enc.set_color(color);
        enc.set_depth(png::BitDepth::Eight);
        enc.set_compression(png::Compression::Fast);
        let mut w = enc.write_header().map_err(|e| Error::format(path, e))?;
        w.write_image_data(data).map_err(|e| Error::format(path, e))?;
    }
    Ok(buf)
}

pub fn write_rgb_png(path: &Path, width: usize, height: usize, rgb: &[u8]) -> Result<()> {
    write_atomic(path, &encode_png(width, height, png::ColorType::Rgb, rgb, path)?)
}

pub fn write_mask_png(path: &Path, mask: &AoiMask) -> Result<()> {
    let bytes = encode_png(mask.width, mask.height, png::ColorType::Grayscale, &mask.to_gray8(), path)?;
    write_atomic(path, &bytes)
}

/// Decoded 8-bit image: width, height, channels, samples.
pub struct Png {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

pub fn read_png(path: &Path) -> Result<Png> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = png::Decoder::new(BufReader::new(file)).read_info().map_err(|e| Error::format(path, e))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::format(path, "image too large"))?;
    let mut data = vec![0; size];
    let info = reader.next_frame(&mut data).map_err(|e| Error::format(path, e))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(Error::format(path, "expected 8-bit samples"));
    }
    let channels = match info.color_type {
        png::ColorType::Grayscale => 1,
        png::ColorType::GrayscaleAlpha => 2,
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        png::ColorType::Indexed => return Err(Error::format(path, "indexed color is not supported")),
    };
    data.truncate(info.buffer_size());
    Ok(Png { width: info.width as usize, height: info.height as usize, channels, data })
}

/// Mask PNG: any nonzero first channel is inside.
pub fn read_mask_png(path: &Path) -> Result<AoiMask> {
    let img = read_png(path)?;
    let mut mask = AoiMask::new(img.width, img.height);
    for (i, px) in img.data.chunks_exact(img.channels).enumerate() {
        mask.data[i] = (px[0] != 0) as u8;
    }
    Ok(mask)
}

#[derive(Debug, Serialize, Deserialize)]
struct FixationRow {
    participant: String,
    stimulus: String,
    index: u32,
    x_px: f64,
    y_px: f64,
    onset_ms: f64,
    duration_ms: f64,
}

/// Read and validate a fixation CSV. An empty file yields no records.
pub fn load_fixations(path: &Path) -> Result<Vec<FixationRecord>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Ok(Vec::new());
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(bytes.as_slice());
    let header = rdr.headers().map_err(|e| Error::format(path, e))?;
    if header.iter().ne(FIXATION_HEADER) {
        return Err(Error::Parse {
            path: path.into(),
            line: 1,
            msg: format!("expected header {}", FIXATION_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for row in rdr.deserialize::<FixationRow>() {
        let row = row.map_err(|e| Error::Parse {
            path: path.into(),
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                _ => e.to_string(),
            },
        })?;
        out.push(FixationRecord {
            participant: row.participant,
            stimulus: row.stimulus,
            index: row.index,
            x: row.x_px,
            y: row.y_px,
            onset_ms: row.onset_ms,
            duration_ms: row.duration_ms,
        });
    }
    validate_records(out).map_err(|e| Error::format(path, e))
}

pub fn fixations_csv(records: &[FixationRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(FIXATION_HEADER).map_err(csv_err)?;
    for r in records {
        w.serialize(FixationRow {
            participant: r.participant.clone(),
            stimulus: r.stimulus.clone(),
            index: r.index,
            x_px: r.x,
            y_px: r.y,
            onset_ms: r.onset_ms,
            duration_ms: r.duration_ms,
        })
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Invalid(e.to_string()))
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

/// Format an optional number for CSV; absent values are empty cells.
pub(crate) fn cell(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{v}"))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::format(path, e))?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::format(path, e))
}
