//! Exact Euclidean distance transforms on the pixel grid.
//!
//! [`edt`] runs the separable lower-envelope algorithm of Felzenszwalb and
//! Huttenlocher on integer squared distances, so every value is exact. The
//! k-nearest maps enumerate a precomputed table of grid offsets sorted by squared
//! length, starting from the ring given by the plain transform.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::image::{BinaryImage, DistanceMap};
use crate::par;

/// Squared distance marking "no foreground point".
pub const INF_SQ: u64 = u64::MAX;

/// Squared Euclidean distance to the nearest foreground pixel, or [`INF_SQ`].
pub fn squared_edt(img: &BinaryImage) -> Vec<u64> {
    squared_edt_mask(img.width(), img.height(), img.mask())
}

pub(crate) fn squared_edt_mask(width: usize, height: usize, mask: &[bool]) -> Vec<u64> {
    debug_assert_eq!(mask.len(), width * height);
    if width == 0 || height == 0 {
        return Vec::new();
    }

    // Vertical pass: distance to the nearest foreground pixel in the same column.
    let mut col = vec![INF_SQ; width * height];
    for x in 0..width {
        if mask[x] {
            col[x] = 0;
        }
    }
    for y in 1..height {
        let (prev, cur) = col.split_at_mut(y * width);
        let prev = &prev[(y - 1) * width..];
        let cur = &mut cur[..width];
        let m = &mask[y * width..(y + 1) * width];
        for x in 0..width {
            cur[x] = if m[x] {
                0
            } else if prev[x] == INF_SQ {
                INF_SQ
            } else {
                prev[x] + 1
            };
        }
    }
    for y in (0..height - 1).rev() {
        let (cur, next) = col.split_at_mut((y + 1) * width);
        let cur = &mut cur[y * width..];
        let next = &next[..width];
        for x in 0..width {
            if next[x] != INF_SQ && next[x] + 1 < cur[x] {
                cur[x] = next[x] + 1;
            }
        }
    }
    for v in &mut col {
        if *v != INF_SQ {
            *v *= *v;
        }
    }

    // Horizontal pass: lower envelope of parabolas per row.
    let mut out = vec![INF_SQ; width * height];
    par::for_each_row(&mut out, width, |y, row| {
        let f = &col[y * width..(y + 1) * width];
        let mut sites = Vec::with_capacity(width);
        let mut bounds = Vec::with_capacity(width);
        lower_envelope(f, row, &mut sites, &mut bounds);
    });
    out
}

fn lower_envelope(f: &[u64], out: &mut [u64], sites: &mut Vec<usize>, bounds: &mut Vec<f64>) {
    sites.clear();
    bounds.clear();
    let key = |q: usize| f[q] as f64 + (q * q) as f64;
    for q in 0..f.len() {
        if f[q] == INF_SQ {
            continue;
        }
        loop {
            match sites.last() {
                None => {
                    sites.push(q);
                    bounds.push(f64::NEG_INFINITY);
                    break;
                }
                Some(&p) => {
                    let s = (key(q) - key(p)) / (2.0 * (q - p) as f64);
                    if s <= *bounds.last().unwrap() {
                        sites.pop();
                        bounds.pop();
                    } else {
                        sites.push(q);
                        bounds.push(s);
                        break;
                    }
                }
            }
        }
    }
    if sites.is_empty() {
        out.fill(INF_SQ);
        return;
    }
    let mut k = 0;
    for (x, o) in out.iter_mut().enumerate() {
        while k + 1 < sites.len() && bounds[k + 1] < x as f64 {
            k += 1;
        }
        let dx = x.abs_diff(sites[k]) as u64;
        *o = dx * dx + f[sites[k]];
    }
}

#[inline]
pub(crate) fn sq_to_dist(d2: u64) -> f64 {
    if d2 == INF_SQ {
        f64::INFINITY
    } else {
        (d2 as f64).sqrt()
    }
}

/// Exact Euclidean distance transform. Foreground pixels get 0; an empty
/// foreground yields `f64::INFINITY` everywhere.
pub fn edt(img: &BinaryImage) -> DistanceMap {
    let values = squared_edt(img).into_iter().map(sq_to_dist).collect();
    DistanceMap::from_raw(img.width(), img.height(), values)
}

/// `min[edt, d_max]`.
pub fn saturated_edt(img: &BinaryImage, d_max: f64) -> DistanceMap {
    let values = squared_edt(img)
        .into_iter()
        .map(|d2| sq_to_dist(d2).min(d_max))
        .collect();
    DistanceMap::from_raw(img.width(), img.height(), values)
}

/// All grid offsets of a `width x height` domain, sorted by squared length.
///
/// Walking the table from a pixel visits candidate points in non-decreasing
/// distance order, so the first `k` foreground hits are its `k` nearest points.
#[derive(Debug)]
pub(crate) struct OffsetTable {
    width: usize,
    height: usize,
    offsets: Vec<(i32, i32)>,
    sq_len: Vec<u64>,
}

impl OffsetTable {
    fn build(width: usize, height: usize) -> Self {
        let (w, h) = (width as i32, height as i32);
        let mut entries: Vec<(u64, i32, i32)> =
            Vec::with_capacity((2 * width).saturating_sub(1) * (2 * height).saturating_sub(1));
        for dy in -(h - 1)..h {
            for dx in -(w - 1)..w {
                let d2 = (dx as i64 * dx as i64 + dy as i64 * dy as i64) as u64;
                entries.push((d2, dy, dx));
            }
        }
        entries.sort_unstable();
        Self {
            width,
            height,
            offsets: entries.iter().map(|&(_, dy, dx)| (dx, dy)).collect(),
            sq_len: entries.iter().map(|&(d2, _, _)| d2).collect(),
        }
    }

    /// Shared table for a domain size; built once per size per process.
    pub(crate) fn for_dims(width: usize, height: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<OffsetTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry((width, height))
            .or_insert_with(|| Arc::new(Self::build(width, height)))
            .clone()
    }

    /// First table index whose squared length is at least `min_sq`.
    #[inline]
    pub(crate) fn start(&self, min_sq: u64) -> usize {
        self.sq_len.partition_point(|&d| d < min_sq)
    }

    /// First table index whose length is at least `d_max`; offsets from there
    /// on only ever contribute saturated distances.
    #[inline]
    pub(crate) fn end_before(&self, d_max: f64) -> usize {
        self.sq_len.partition_point(|&d| (d as f64).sqrt() < d_max)
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.sq_len.len()
    }

    /// Squared distances from `(x, y)` to the pixels accepted by `member`, in
    /// non-decreasing order, visiting table indices `from..end`.
    #[inline]
    pub(crate) fn hits<'a, F>(
        &'a self,
        x: usize,
        y: usize,
        from: usize,
        end: usize,
        member: F,
    ) -> impl Iterator<Item = u64> + 'a
    where
        F: Fn(usize) -> bool + 'a,
    {
        let (w, h) = (self.width as i64, self.height as i64);
        let (x, y) = (x as i64, y as i64);
        let from = from.min(end);
        self.offsets[from..end]
            .iter()
            .zip(&self.sq_len[from..end])
            .filter_map(move |(&(dx, dy), &d2)| {
                let nx = x + dx as i64;
                let ny = y + dy as i64;
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    return None;
                }
                member((ny * w + nx) as usize).then_some(d2)
            })
    }
}

/// Distances from every pixel to its `k` nearest foreground points.
#[derive(Clone, Debug, PartialEq)]
pub struct KnnDistanceMaps {
    layers: Vec<DistanceMap>,
}

impl KnnDistanceMaps {
    pub fn k(&self) -> usize {
        self.layers.len()
    }

    /// Layer `i` (0-based) holds the distance to the `(i + 1)`-th nearest point.
    pub fn layer(&self, i: usize) -> &DistanceMap {
        &self.layers[i]
    }

    pub fn layers(&self) -> &[DistanceMap] {
        &self.layers
    }

    /// Sorted distances at one pixel.
    pub fn at(&self, x: usize, y: usize) -> Vec<f64> {
        self.layers.iter().map(|l| l.get(x, y)).collect()
    }
}

/// Distance maps to the 1st..k-th nearest foreground point. Layers beyond the
/// number of foreground points hold `f64::INFINITY`.
///
/// # Panics
///
/// Panics if `k == 0`.
pub fn knn_distance_maps(img: &BinaryImage, k: usize) -> KnnDistanceMaps {
    assert!(k >= 1, "k must be at least 1");
    let (width, height) = img.dims();
    let n = width * height;
    let count = img.count();
    let wanted = k.min(count);
    let table = OffsetTable::for_dims(width, height);
    let nearest = squared_edt(img);
    let mask = img.mask();

    let mut flat = vec![f64::INFINITY; n * k];
    par::for_each_row(&mut flat, k, |p, slots| {
        if wanted == 0 {
            return;
        }
        let (x, y) = (p % width, p / width);
        let from = table.start(nearest[p]);
        let hits = table.hits(x, y, from, table.len(), |i| mask[i]);
        for (slot, d2) in slots.iter_mut().zip(hits.take(wanted))
        {
            *slot = (d2 as f64).sqrt();
        }
    });

    let layers = (0..k)
        .map(|i| {
            let values = (0..n).map(|p| flat[p * k + i]).collect();
            DistanceMap::from_raw(width, height, values)
        })
        .collect();
    KnnDistanceMaps { layers }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(img: &BinaryImage) -> Vec<f64> {
        let pts: Vec<_> = img.points().collect();
        let mut out = Vec::with_capacity(img.len());
        for y in 0..img.height() {
            for x in 0..img.width() {
                let best = pts
                    .iter()
                    .map(|&(px, py)| {
                        let dx = px as f64 - x as f64;
                        let dy = py as f64 - y as f64;
                        (dx * dx + dy * dy).sqrt()
                    })
                    .fold(f64::INFINITY, f64::min);
                out.push(best);
            }
        }
        out
    }

    #[test]
    fn single_corner_pixel() {
        let img = BinaryImage::from_points(3, 3, [(0, 0)]).unwrap();
        let d = edt(&img);
        for y in 0..3 {
            for x in 0..3 {
                assert_eq!(d.get(x, y), ((x * x + y * y) as f64).sqrt());
            }
        }
        assert_eq!(d.get(2, 2), 2.0 * 2f64.sqrt());
    }

    #[test]
    fn full_and_empty() {
        assert!(edt(&BinaryImage::full(5, 4)).values().iter().all(|&v| v == 0.0));
        assert!(edt(&BinaryImage::new(5, 4))
            .values()
            .iter()
            .all(|v| v.is_infinite()));
    }

    #[test]
    fn matches_brute_force_on_structured_cases() {
        let cases = [
            BinaryImage::from_points(7, 5, [(6, 4)]).unwrap(),
            BinaryImage::from_points(9, 1, [(0, 0), (8, 0)]).unwrap(),
            BinaryImage::from_points(1, 9, [(0, 4)]).unwrap(),
            BinaryImage::from_points(8, 8, [(0, 7), (7, 0), (3, 3), (4, 3)]).unwrap(),
        ];
        for img in &cases {
            let fast = edt(img);
            assert_eq!(fast.values(), brute_force(img).as_slice());
        }
    }

    #[test]
    fn knn_collinear_points() {
        let img = BinaryImage::from_points(4, 1, [(0, 0), (3, 0)]).unwrap();
        let maps = knn_distance_maps(&img, 3);
        assert_eq!(maps.at(1, 0), vec![1.0, 2.0, f64::INFINITY]);
    }

    #[test]
    fn knn_first_layer_is_edt() {
        let img = BinaryImage::from_points(6, 5, [(1, 1), (4, 3), (5, 0)]).unwrap();
        let maps = knn_distance_maps(&img, 1);
        assert_eq!(maps.layer(0), &edt(&img));
    }

    #[test]
    fn offset_table_is_sorted_and_complete() {
        let t = OffsetTable::build(3, 2);
        assert_eq!(t.offsets.len(), 5 * 3);
        assert!(t.sq_len.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(t.start(0), 0);
        assert_eq!(t.sq_len[t.start(2)], 2);
    }
}
