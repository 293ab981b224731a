//! Brute-force reference implementations shared by the integration tests.

#![allow(dead_code)]

use proptest::prelude::*;
use sdt_core::BinaryImage;

/// Distances from `(x, y)` to every foreground point, ascending.
pub fn sorted_distances(img: &BinaryImage, x: usize, y: usize) -> Vec<f64> {
    let mut d: Vec<f64> = img
        .points()
        .map(|(px, py)| {
            let (dx, dy) = (px as f64 - x as f64, py as f64 - y as f64);
            (dx * dx + dy * dy).sqrt()
        })
        .collect();
    d.sort_by(f64::total_cmp);
    d
}

pub fn brute_edt(img: &BinaryImage) -> Vec<f64> {
    let (w, h) = img.dims();
    (0..w * h)
        .map(|p| sorted_distances(img, p % w, p / w).first().copied().unwrap_or(f64::INFINITY))
        .collect()
}

/// Random binary image with each pixel set with probability `density`.
pub fn image_strategy(w: usize, h: usize, density: f64) -> impl Strategy<Value = BinaryImage> {
    prop::collection::vec(prop::bool::weighted(density), w * h)
        .prop_map(move |mask| BinaryImage::from_mask(w, h, mask).unwrap())
}

/// Random image with at most `max_points` foreground points.
pub fn sparse_image_strategy(w: usize, h: usize, max_points: usize) -> impl Strategy<Value = BinaryImage> {
    prop::collection::vec((0..w as i64, 0..h as i64), 0..=max_points)
        .prop_map(move |pts| BinaryImage::from_points(w, h, pts).unwrap())
}
