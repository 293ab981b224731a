//! Seeded watershed segmentation of binary objects on their internal distance
//! maps.
//!
//! The object's distance to its own background is computed with any
//! [`Backend`]; regional maxima (after h-maxima suppression) become seeds and a
//! priority flood from the seeds labels the object. All neighbourhoods here are
//! 4-connected.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::{BinaryImage, DistanceMap, LabelMap};
use crate::sdt::SdtParams;
use crate::transform::{transform_at, Backend};

/// Merge tolerance used when no preset chooses another one.
pub const DEFAULT_H: f64 = 0.5;

fn neighbours4(w: usize, h: usize, p: usize) -> impl Iterator<Item = usize> {
    let (x, y) = (p % w, p / w);
    let up = (y > 0).then(|| p - w);
    let left = (x > 0).then(|| p - 1);
    let right = (x + 1 < w).then(|| p + 1);
    let down = (y + 1 < h).then(|| p + w);
    [up, left, right, down].into_iter().flatten()
}

/// Distance from every object pixel to the object's background under
/// `backend`; background pixels are 0. An object covering the whole domain has
/// no background, so every pixel saturates at `d_max`.
pub fn internal_distance(
    object: &BinaryImage,
    backend: Backend,
    params: &SdtParams,
    seed: u64,
) -> Result<DistanceMap> {
    transform_at(&object.complement(), object.mask(), backend, params, seed)
}

/// Max-heap entry: higher value first, then earlier insertion.
#[derive(Debug)]
struct Entry {
    value: f64,
    order: u64,
    pixel: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| other.order.cmp(&self.order))
    }
}

fn check_dims(dist: &DistanceMap, object: &BinaryImage) -> Result<()> {
    if dist.dims() != object.dims() {
        return Err(Error::DimensionMismatch {
            expected: object.dims(),
            found: dist.dims(),
        });
    }
    Ok(())
}

/// Grayscale reconstruction by dilation of `marker` under `mask`, restricted to
/// object pixels.
fn reconstruct(marker: &[f64], mask: &[f64], object: &[bool], w: usize, h: usize) -> Vec<f64> {
    let mut r = marker.to_vec();
    let mut heap = BinaryHeap::new();
    let mut order = 0;
    for p in (0..r.len()).filter(|&p| object[p]) {
        heap.push(Entry { value: r[p], order, pixel: p });
        order += 1;
    }
    while let Some(Entry { value, pixel, .. }) = heap.pop() {
        if value < r[pixel] {
            continue;
        }
        for q in neighbours4(w, h, pixel) {
            if !object[q] {
                continue;
            }
            let candidate = value.min(mask[q]);
            if candidate > r[q] {
                r[q] = candidate;
                heap.push(Entry { value: candidate, order, pixel: q });
                order += 1;
            }
        }
    }
    r
}

/// Regional maxima of `values` over object pixels: 4-connected plateaus with no
/// strictly higher object neighbour, labeled `1..` in row-major order of
/// their first pixel.
fn regional_maxima(values: &[f64], object: &[bool], w: usize, h: usize) -> LabelMap {
    let n = values.len();
    let mut region = vec![usize::MAX; n];
    let mut labels = vec![0u32; n];
    let mut next = 0;
    let mut cells = Vec::new();
    for start in 0..n {
        if !object[start] || region[start] != usize::MAX {
            continue;
        }
        cells.clear();
        cells.push(start);
        region[start] = start;
        let mut is_max = true;
        let mut i = 0;
        while i < cells.len() {
            let p = cells[i];
            i += 1;
            for q in neighbours4(w, h, p) {
                if !object[q] {
                    continue;
                }
                if values[q] > values[p] {
                    is_max = false;
                } else if values[q] == values[p] && region[q] == usize::MAX {
                    region[q] = start;
                    cells.push(q);
                }
            }
        }
        if is_max {
            next += 1;
            for &p in &cells {
                labels[p] = next;
            }
        }
    }
    LabelMap::from_labels(w, h, labels).expect("matching dimensions")
}

/// Seeds from the regional maxima of `dist` over the object after h-maxima
/// suppression: maxima whose height above the surrounding saddle is below `h`
/// merge into their neighbours. `h = 0` keeps every regional maximum.
pub fn extract_seeds(dist: &DistanceMap, object: &BinaryImage, h: f64) -> Result<LabelMap> {
    check_dims(dist, object)?;
    if !(h >= 0.0) || h.is_infinite() {
        return Err(Error::InvalidParameter(format!("merge tolerance must be >= 0, got {h}")));
    }
    let (w, ht) = object.dims();
    let f = dist.values();
    let values = if h == 0.0 {
        f.to_vec()
    } else {
        let marker: Vec<f64> = f.iter().map(|&v| v - h).collect();
        reconstruct(&marker, f, object.mask(), w, ht)
    };
    Ok(regional_maxima(&values, object.mask(), w, ht))
}

/// A labeled partition of the object.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentationResult {
    /// 0 on the background, a segment label elsewhere.
    pub labels: LabelMap,
    /// Number of distinct labels in use.
    pub segment_count: usize,
    /// Object components that contained no seed and received a fresh label.
    pub unseeded_components: usize,
}

impl SegmentationResult {
    /// `segment_count` followed by a `label,area` table.
    pub fn to_csv(&self) -> String {
        let mut out = format!("segment_count\n{}\n\nlabel,area\n", self.segment_count);
        for (label, area) in self.labels.areas().iter().enumerate().skip(1) {
            if *area > 0 {
                let _ = writeln!(out, "{label},{area}");
            }
        }
        out
    }
}

/// Priority flood from `seeds` over the object, highest distance first with
/// FIFO order among equal distances. Seed pixels enter the queue in row-major
/// order; every object pixel takes the label of the neighbour that reaches it
/// first. Object components without any seed each receive a fresh label.
pub fn watershed_segment(
    dist: &DistanceMap,
    seeds: &LabelMap,
    object: &BinaryImage,
) -> Result<SegmentationResult> {
    check_dims(dist, object)?;
    if seeds.dims() != object.dims() {
        return Err(Error::DimensionMismatch {
            expected: object.dims(),
            found: seeds.dims(),
        });
    }
    let (w, h) = object.dims();
    let obj = object.mask();
    let f = dist.values();
    let mut labels = seeds.labels().to_vec();
    let mut heap = BinaryHeap::new();
    let mut order = 0u64;
    for (p, &l) in labels.iter().enumerate() {
        if l == 0 {
            continue;
        }
        if !obj[p] {
            return Err(Error::SeedOutsideObject { x: p % w, y: p / w });
        }
        heap.push(Entry { value: f[p], order, pixel: p });
        order += 1;
    }
    if heap.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let mut used: Vec<u32> = labels.iter().copied().filter(|&l| l != 0).collect();
    used.sort_unstable();
    used.dedup();

    while let Some(Entry { pixel, .. }) = heap.pop() {
        let l = labels[pixel];
        for q in neighbours4(w, h, pixel) {
            if obj[q] && labels[q] == 0 {
                labels[q] = l;
                heap.push(Entry { value: f[q], order, pixel: q });
                order += 1;
            }
        }
    }

    let mut fresh = *used.last().expect("non-empty seeds");
    let mut unseeded = 0;
    let mut stack = Vec::new();
    for start in 0..labels.len() {
        if !obj[start] || labels[start] != 0 {
            continue;
        }
        fresh += 1;
        unseeded += 1;
        labels[start] = fresh;
        stack.push(start);
        while let Some(p) = stack.pop() {
            for q in neighbours4(w, h, p) {
                if obj[q] && labels[q] == 0 {
                    labels[q] = fresh;
                    stack.push(q);
                }
            }
        }
    }

    Ok(SegmentationResult {
        labels: LabelMap::from_labels(w, h, labels)?,
        segment_count: used.len() + unseeded,
        unseeded_components: unseeded,
    })
}

/// Internal distance, seeding and flooding in one call. An empty object has no
/// segments.
pub fn segment(
    object: &BinaryImage,
    backend: Backend,
    params: &SdtParams,
    seed: u64,
    h: f64,
) -> Result<SegmentationResult> {
    let (w, ht) = object.dims();
    if object.count() == 0 {
        return Ok(SegmentationResult {
            labels: LabelMap::new(w, ht),
            segment_count: 0,
            unseeded_components: 0,
        });
    }
    let dist = internal_distance(object, backend, params, seed)?;
    let seeds = extract_seeds(&dist, object, h)?;
    watershed_segment(&dist, &seeds, object)
}
