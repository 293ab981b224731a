//! Browser demo: distance-map heatmaps of user-drawn point sets, two-disk
//! watershed separation and a noisy-letter backend comparison.
//!
//! Each exported function returns a [`Frame`]: an RGBA buffer ready for
//! `ImageData` plus a one-line text summary. The pure-Rust builders behind
//! them are public so they can be tested natively.

use wasm_bindgen::prelude::*;

use sdt_core::experiments::aade;
use sdt_core::rng;
use sdt_core::synth::{add_noise_points, digitize_disks, synth_letter, Glyph};
use sdt_core::watershed::segment;
use sdt_core::{saturated_edt, transform, Backend, BinaryImage, DistanceMap, Error, LabelMap, SdtParams};

/// Monte Carlo realizations used by the demo; lower than the library default
/// so that sliders stay responsive.
pub const DEMO_REALIZATIONS: usize = 100;

/// Radius of the demo disks.
pub const DISK_RADIUS: f64 = 3.0 * std::f64::consts::PI;

const DISK_DOMAIN: usize = 64;

#[wasm_bindgen]
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    rgba: Vec<u8>,
    summary: String,
}

#[wasm_bindgen]
impl Frame {
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.width
    }

    #[wasm_bindgen(getter)]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major RGBA bytes, four per pixel.
    #[wasm_bindgen(getter)]
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn summary(&self) -> String {
        self.summary.clone()
    }
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn parse_backend(name: &str) -> Result<Backend, Error> {
    name.parse()
}

fn params(rho: f64, d_max: f64) -> Result<SdtParams, Error> {
    SdtParams::new(rho, d_max)?.with_realizations(DEMO_REALIZATIONS)
}

/// Piecewise-linear dark-blue to yellow ramp for `t` in [0, 1].
pub fn colormap(t: f64) -> [u8; 3] {
    const STOPS: [[f64; 3]; 5] = [
        [68.0, 1.0, 84.0],
        [59.0, 82.0, 139.0],
        [33.0, 145.0, 140.0],
        [94.0, 201.0, 98.0],
        [253.0, 231.0, 37.0],
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 1.0 };
    let pos = t * (STOPS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(STOPS.len() - 2);
    let f = pos - i as f64;
    let mut out = [0; 3];
    for (c, slot) in out.iter_mut().enumerate() {
        *slot = (STOPS[i][c] + f * (STOPS[i + 1][c] - STOPS[i][c])).round() as u8;
    }
    out
}

/// Heatmap of `map` scaled to `[0, scale]`; foreground pixels of `overlay`
/// are drawn white.
fn heatmap_rgba(map: &DistanceMap, scale: f64, overlay: &BinaryImage) -> Vec<u8> {
    let mut rgba = Vec::with_capacity(map.values().len() * 4);
    for (&v, &on) in map.values().iter().zip(overlay.mask()) {
        let [r, g, b] = if on { [255, 255, 255] } else { colormap(v / scale) };
        rgba.extend([r, g, b, 255]);
    }
    rgba
}

/// Distance map of a drawn point set. `mask` holds one byte per pixel, non-zero
/// for foreground.
pub fn point_heatmap(width: usize, height: usize, mask: &[u8], backend: &str, rho: f64, seed: u64) -> Result<Frame, Error> {
    let img = BinaryImage::from_mask(width, height, mask.iter().map(|&b| b != 0).collect())?;
    let backend = parse_backend(backend)?;
    let p = params(rho, sdt_core::sdt::default_d_max(width, height))?;
    let map = transform(&img, backend, &p, seed);
    let max = map.max_finite().unwrap_or(0.0).max(1.0);
    let mean = map.values().iter().sum::<f64>() / map.values().len().max(1) as f64;
    Ok(Frame {
        width,
        height,
        rgba: heatmap_rgba(&map, max, &img),
        summary: format!("{backend}: {} points, mean distance {mean:.2}, max {max:.2}", img.count()),
    })
}

/// Segments two overlapping disks whose centres are `delta_over_r` radii
/// apart and colours each segment.
pub fn disk_separation(delta_over_r: f64, backend: &str, rho: f64, h: f64, seed: u64) -> Result<Frame, Error> {
    let backend = parse_backend(backend)?;
    let delta = delta_over_r * DISK_RADIUS;
    let mid = DISK_DOMAIN as f64 / 2.0;
    let c1 = (mid - delta / 2.0 + 0.5, mid + 0.5);
    let c2 = (c1.0 + delta, c1.1);
    let object = digitize_disks(c1, c2, DISK_RADIUS, DISK_DOMAIN, DISK_DOMAIN)?;
    let p = params(rho, sdt_core::sdt::default_d_max(DISK_DOMAIN, DISK_DOMAIN))?;
    let result = segment(&object, backend, &p, seed, h)?;
    Ok(Frame {
        width: DISK_DOMAIN,
        height: DISK_DOMAIN,
        rgba: label_rgba(&result.labels),
        summary: format!("{backend}: {} segment(s) at delta = {delta_over_r:.2} r", result.segment_count),
    })
}

fn label_rgba(labels: &LabelMap) -> Vec<u8> {
    const PALETTE: [[u8; 3]; 6] = [
        [230, 97, 1],
        [94, 60, 153],
        [27, 158, 119],
        [231, 41, 138],
        [102, 166, 30],
        [230, 171, 2],
    ];
    let mut rgba = Vec::with_capacity(labels.labels().len() * 4);
    for &l in labels.labels() {
        let [r, g, b] = if l == 0 { [16, 16, 16] } else { PALETTE[(l as usize - 1) % PALETTE.len()] };
        rgba.extend([r, g, b, 255]);
    }
    rgba
}

/// Side-by-side heatmaps of one noisy letter under every backend, with the
/// error of each against the clean letter's distance map.
pub fn letter_comparison(glyph: &str, size: usize, p: f64, rho: f64, seed: u64) -> Result<Frame, Error> {
    let glyph = match glyph {
        "A" | "a" => Glyph::A,
        "X" | "x" => Glyph::XPointCloud,
        other => return Err(Error::InvalidParameter(format!("unknown glyph {other:?}"))),
    };
    let clean = synth_letter(glyph, size, size);
    let noisy = add_noise_points(&clean, p, &mut rng::stream(seed, 0))?;
    let d_max = sdt_core::sdt::default_d_max(size, size);
    let params = params(rho, d_max)?;
    let reference = saturated_edt(&clean, d_max);

    let maps: Vec<DistanceMap> = Backend::ALL
        .iter()
        .map(|&b| transform(&noisy, b, &params, rng::derive_seed(seed, 1)))
        .collect();
    let scale = reference.max_finite().unwrap_or(1.0).max(1.0);
    let width = size * 3;
    let mut rgba = vec![0; width * size * 4];
    let mut parts = Vec::new();
    for (panel, (map, backend)) in maps.iter().zip(Backend::ALL).enumerate() {
        let tile = heatmap_rgba(map, scale, &noisy);
        for y in 0..size {
            let src = &tile[y * size * 4..(y + 1) * size * 4];
            let start = (y * width + panel * size) * 4;
            rgba[start..start + size * 4].copy_from_slice(src);
        }
        parts.push(format!("{backend} AADE {:.2}", aade(map, &reference)?));
    }
    Ok(Frame {
        width,
        height: size,
        rgba,
        summary: format!("{} noise points; {}", noisy.count() - clean.count(), parts.join(", ")),
    })
}

#[wasm_bindgen(js_name = pointHeatmap)]
pub fn point_heatmap_js(width: usize, height: usize, mask: &[u8], backend: &str, rho: f64, seed: u32) -> Result<Frame, JsError> {
    point_heatmap(width, height, mask, backend, rho, seed as u64).map_err(js)
}

#[wasm_bindgen(js_name = diskSeparation)]
pub fn disk_separation_js(delta_over_r: f64, backend: &str, rho: f64, h: f64, seed: u32) -> Result<Frame, JsError> {
    disk_separation(delta_over_r, backend, rho, h, seed as u64).map_err(js)
}

#[wasm_bindgen(js_name = letterComparison)]
pub fn letter_comparison_js(glyph: &str, size: usize, p: f64, rho: f64, seed: u32) -> Result<Frame, JsError> {
    letter_comparison(glyph, size, p, rho, seed as u64).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colormap_endpoints() {
        assert_eq!(colormap(0.0), [68, 1, 84]);
        assert_eq!(colormap(1.0), [253, 231, 37]);
        assert_eq!(colormap(f64::INFINITY), colormap(1.0));
        assert_eq!(colormap(-3.0), colormap(0.0));
    }

    #[test]
    fn heatmap_has_one_rgba_quad_per_pixel() {
        let mut mask = vec![0u8; 20 * 10];
        mask[5 * 20 + 7] = 1;
        let f = point_heatmap(20, 10, &mask, "det-sdt", 0.5, 1).unwrap();
        assert_eq!(f.rgba.len(), 20 * 10 * 4);
        assert_eq!(&f.rgba[(5 * 20 + 7) * 4..(5 * 20 + 7) * 4 + 4], &[255, 255, 255, 255]);
        assert!(f.summary.starts_with("det-sdt: 1 points"));
        assert!(point_heatmap(20, 10, &mask[1..], "dt", 0.0, 1).is_err());
        assert!(point_heatmap(20, 10, &mask, "nope", 0.0, 1).is_err());
    }

    #[test]
    fn disks_split_only_when_far_apart() {
        assert!(disk_separation(2.0, "dt", 0.75, 0.25, 3).unwrap().summary.contains(" 2 segment"));
        assert!(disk_separation(0.1, "det-sdt", 0.75, 0.25, 3).unwrap().summary.contains(" 1 segment"));
    }

    #[test]
    fn letter_panels_are_side_by_side() {
        let f = letter_comparison("X", 48, 0.005, 0.75, 9).unwrap();
        assert_eq!((f.width, f.height), (144, 48));
        assert_eq!(f.rgba.len(), 144 * 48 * 4);
        assert!(f.summary.contains("dt AADE") && f.summary.contains("det-sdt AADE"));
        assert_eq!(f, letter_comparison("x", 48, 0.005, 0.75, 9).unwrap());
        assert!(letter_comparison("Q", 48, 0.0, 0.5, 0).is_err());
    }
}
