//! File formats.
//!
//! * PGM `P5` with maxval up to 255: read and write. Writing always uses
//!   maxval 255 and the header `P5\n<width> <height>\n255\n`. Binary images
//!   are written as {0, 255}.
//! * PNG, 8-bit: read only (colour inputs are converted to luma). Requires
//!   the `png` feature.
//! * Distance maps: CSV grid (one image row per line, values in Rust's
//!   shortest round-trip notation, `inf` for the empty-set sentinel) and a raw
//!   float file: the ASCII header `SDTMAP f32le <width> <height>\n` followed by
//!   `width * height` little-endian IEEE-754 `f32` values in row-major order.
//! * Label maps: PGM where label 0 is black and label `l > 0` maps to grey
//!   `1 + (l * 47 - 1) % 255`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{BinaryImage, DistanceMap, GrayImage, LabelMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Png,
}

impl ImageFormat {
    /// Guesses the format from the file extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("pgm") => Ok(ImageFormat::Pgm),
            Some("png") => Ok(ImageFormat::Png),
            _ => Err(Error::InvalidParameter(format!(
                "cannot infer image format of {}",
                path.display()
            ))),
        }
    }
}

/// Reads a grey-scale image, normalising intensities by the format's maximum.
pub fn read_image(path: &Path, format: ImageFormat) -> Result<GrayImage> {
    let bytes = fs::read(path)?;
    match format {
        ImageFormat::Pgm => decode_pgm(&bytes),
        ImageFormat::Png => decode_png(&bytes),
    }
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("{what} out of range")))
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::MalformedHeader("expected magic number P5".into()));
    }
    let mut header = HeaderReader { bytes, pos: 2 };
    let width = header.number("width")?;
    let height = header.number("height")?;
    let maxval = header.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::MalformedHeader(format!("maxval {maxval} out of range")));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedBitDepth(format!(
            "16-bit PGM (maxval {maxval}) is not supported"
        )));
    }
    if !bytes.get(header.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::MalformedHeader("missing whitespace after maxval".into()));
    }
    let data = &bytes[header.pos + 1..];
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedHeader("image too large".into()))?;
    if data.len() < n {
        return Err(Error::Decode(format!(
            "expected {n} pixel bytes, found {}",
            data.len()
        )));
    }
    let scale = maxval as f64;
    let values = data[..n].iter().map(|&b| b as f64 / scale).collect();
    GrayImage::from_values(width, height, values)
}

/// P5 encoding with maxval 255; values are rounded to the nearest level.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.values().iter().map(|&v| (v * 255.0).round() as u8));
    out
}

pub fn encode_binary_pgm(img: &BinaryImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.mask().iter().map(|&b| if b { 255u8 } else { 0 }));
    out
}

pub fn write_pgm(path: &Path, img: &GrayImage) -> Result<()> {
    Ok(fs::write(path, encode_pgm(img))?)
}

pub fn write_binary_pgm(path: &Path, img: &BinaryImage) -> Result<()> {
    Ok(fs::write(path, encode_binary_pgm(img))?)
}

#[cfg(feature = "png")]
pub fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    use image::{DynamicImage, ImageFormat as Fmt};

    if bytes.is_empty() {
        return Err(Error::MalformedHeader("empty PNG file".into()));
    }
    let img = image::load_from_memory_with_format(bytes, Fmt::Png)
        .map_err(|e| Error::Decode(e.to_string()))?;
    let luma = match img {
        DynamicImage::ImageLuma8(l) => l,
        DynamicImage::ImageLumaA8(_) | DynamicImage::ImageRgb8(_) | DynamicImage::ImageRgba8(_) => {
            img.to_luma8()
        }
        other => {
            return Err(Error::UnsupportedBitDepth(format!(
                "PNG colour type {:?} is not 8-bit",
                other.color()
            )))
        }
    };
    let (w, h) = luma.dimensions();
    let values = luma.as_raw().iter().map(|&b| b as f64 / 255.0).collect();
    GrayImage::from_values(w as usize, h as usize, values)
}

#[cfg(not(feature = "png"))]
pub fn decode_png(_bytes: &[u8]) -> Result<GrayImage> {
    Err(Error::Decode("built without PNG support".into()))
}

/// One CSV row per image row.
pub fn distance_map_to_csv(map: &DistanceMap) -> String {
    let mut out = String::new();
    for y in 0..map.height() {
        for x in 0..map.width() {
            if x > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", map.get(x, y));
        }
        out.push('\n');
    }
    out
}

pub fn distance_map_from_csv(text: &str) -> Result<DistanceMap> {
    let mut values = Vec::new();
    let mut width = None;
    let mut height = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let row: Vec<f64> = line
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Decode(format!("bad CSV value {t:?}")))
            })
            .collect::<Result<_>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Decode("ragged CSV grid".into()));
            }
            _ => {}
        }
        values.extend(row);
        height += 1;
    }
    DistanceMap::from_values(width.unwrap_or(0), height, values)
}

const RAW_MAGIC: &str = "SDTMAP f32le";

pub fn encode_distance_raw(map: &DistanceMap) -> Vec<u8> {
    let mut out = format!("{RAW_MAGIC} {} {}\n", map.width(), map.height()).into_bytes();
    for &v in map.values() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

pub fn decode_distance_raw(bytes: &[u8]) -> Result<DistanceMap> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::MalformedHeader("missing raw header line".into()))?;
    let header = std::str::from_utf8(&bytes[..nl])
        .map_err(|_| Error::MalformedHeader("raw header is not ASCII".into()))?;
    let rest = header
        .strip_prefix(RAW_MAGIC)
        .ok_or_else(|| Error::MalformedHeader(format!("expected {RAW_MAGIC:?}")))?;
    let dims: Vec<usize> = rest
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::MalformedHeader(format!("bad dimension {t:?}"))))
        .collect::<Result<_>>()?;
    let [width, height] = dims[..] else {
        return Err(Error::MalformedHeader("expected width and height".into()));
    };
    let data = &bytes[nl + 1..];
    if data.len() != width * height * 4 {
        return Err(Error::Decode(format!(
            "expected {} data bytes, found {}",
            width * height * 4,
            data.len()
        )));
    }
    let values = data
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();
    DistanceMap::from_values(width, height, values)
}

/// Grey level used for a label in label images.
pub fn label_gray(label: u32) -> u8 {
    if label == 0 {
        0
    } else {
        (1 + (label as u64 * 47 - 1) % 255) as u8
    }
}

pub fn encode_label_pgm(labels: &LabelMap) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", labels.width(), labels.height()).into_bytes();
    out.extend(labels.labels().iter().map(|&l| label_gray(l)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_small_pgm() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend([0u8, 255, 128, 64]);
        let img = decode_pgm(&bytes).unwrap();
        assert_eq!(img.values(), &[0.0, 1.0, 128.0 / 255.0, 64.0 / 255.0]);
    }

    #[test]
    fn header_comments_and_small_maxval() {
        let mut bytes = b"P5 # comment\n3 # w\n1\n# maxval next\n4\n".to_vec();
        bytes.extend([0u8, 2, 4]);
        let img = decode_pgm(&bytes).unwrap();
        assert_eq!(img.values(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn pgm_errors() {
        assert!(matches!(decode_pgm(b""), Err(Error::MalformedHeader(_))));
        assert!(matches!(decode_pgm(b"P2\n1 1\n255\n0"), Err(Error::MalformedHeader(_))));
        assert!(matches!(decode_pgm(b"P5\n1\n"), Err(Error::MalformedHeader(_))));
        assert!(matches!(
            decode_pgm(b"P5\n1 1\n65535\n\0\0"),
            Err(Error::UnsupportedBitDepth(_))
        ));
        assert!(matches!(decode_pgm(b"P5\n2 2\n255\n\0"), Err(Error::Decode(_))));
    }

    #[test]
    fn writes_canonical_header() {
        let img = GrayImage::from_values(2, 1, vec![0.0, 1.0]).unwrap();
        assert_eq!(encode_pgm(&img), b"P5\n2 1\n255\n\x00\xff");
        let bin = BinaryImage::from_points(2, 1, [(1, 0)]).unwrap();
        assert_eq!(encode_binary_pgm(&bin), b"P5\n2 1\n255\n\x00\xff");
    }

    #[test]
    fn csv_and_raw_round_trip() {
        let map = DistanceMap::from_values(3, 2, vec![0.0, 1.5, f64::INFINITY, 2.0, 0.25, 7.0])
            .unwrap();
        let csv = distance_map_to_csv(&map);
        assert_eq!(csv, "0,1.5,inf\n2,0.25,7\n");
        assert_eq!(distance_map_from_csv(&csv).unwrap(), map);
        let raw = encode_distance_raw(&map);
        assert!(raw.starts_with(b"SDTMAP f32le 3 2\n"));
        assert_eq!(raw.len(), 17 + 6 * 4);
        assert_eq!(decode_distance_raw(&raw).unwrap(), map);
    }

    #[test]
    fn label_grays_are_distinct_for_small_labels() {
        assert_eq!(label_gray(0), 0);
        let grays: std::collections::HashSet<u8> = (1..=255).map(label_gray).collect();
        assert_eq!(grays.len(), 255);
        assert!(!grays.contains(&0));
    }

    #[cfg(feature = "png")]
    #[test]
    fn png_gray8_reads() {
        use image::{GrayImage as Png, Luma};
        let mut png = Png::new(2, 1);
        png.put_pixel(1, 0, Luma([51]));
        let mut bytes = Vec::new();
        png.write_to(&mut std::io::Cursor::new(&mut bytes), image::ImageFormat::Png)
            .unwrap();
        let img = decode_png(&bytes).unwrap();
        assert_eq!(img.values(), &[0.0, 0.2]);
        assert!(matches!(decode_png(&[]), Err(Error::MalformedHeader(_))));
    }
}
