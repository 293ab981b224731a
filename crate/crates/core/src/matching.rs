//! Template matching with the sum of minimal distances (SMD), and analysis of
//! the local minima of the resulting distance landscape.
//!
//! For a template `T` placed over an image window `X`,
//!
//! `d(T, X) = sum_{t in T} d(t, X) + sum_{t not in T} d(t, complement(X))`
//!
//! where the point-to-set distances come from a distance map of the image
//! foreground and one of its background, produced by any [`Backend`].

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::{BinaryImage, DistanceMap, LabelMap};
use crate::par;
use crate::rng;
use crate::sdt::SdtParams;
use crate::transform::{transform, Backend};

/// The `rho` sweep used by the template-matching study:
/// `0, 0.025, ..., 0.975` followed by `0.99`.
pub fn rho_sweep() -> Vec<f64> {
    (0..40).map(|i| i as f64 / 40.0).chain([0.99]).collect()
}

/// Distance maps of a set and of its complement under one backend.
#[derive(Clone, Debug, PartialEq)]
pub struct SetDistanceMaps {
    pub foreground: DistanceMap,
    pub background: DistanceMap,
}

impl SetDistanceMaps {
    /// The foreground map uses the stream `derive_seed(seed, 0)` and the
    /// background map `derive_seed(seed, 1)`.
    pub fn compute(img: &BinaryImage, backend: Backend, params: &SdtParams, seed: u64) -> Self {
        SetDistanceMaps {
            foreground: transform(img, backend, params, rng::derive_seed(seed, 0)),
            background: transform(&img.complement(), backend, params, rng::derive_seed(seed, 1)),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.foreground.dims()
    }
}

/// SMD from `a` to the set whose maps are `b`: foreground pixels of `a` read
/// the foreground map, background pixels read the background map.
pub fn smd_distance(a: &BinaryImage, b: &SetDistanceMaps) -> Result<f64> {
    if a.dims() != b.dims() || b.background.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            expected: a.dims(),
            found: b.dims(),
        });
    }
    Ok(a
        .mask()
        .iter()
        .zip(b.foreground.values().iter().zip(b.background.values()))
        .map(|(&m, (&f, &g))| if m { f } else { g })
        .sum())
}

/// SMD values over every translation that keeps the template inside the image.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchField {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl MatchField {
    pub fn from_values(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: (width, height),
                found: (values.len(), 1),
            });
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!("field values must be finite and >= 0, got {v}")));
        }
        Ok(MatchField { width, height, values })
    }

    /// Number of offsets along x and y.
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, ox: usize, oy: usize) -> f64 {
        self.values[oy * self.width + ox]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `offset_x,offset_y,value` rows in row-major order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("offset_x,offset_y,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", i % self.width, i / self.width, v);
        }
        out
    }
}

/// Exhaustive translation search of `template` over `image`.
///
/// The image maps are computed once over the whole image (see
/// [`SetDistanceMaps::compute`]) and each translation reads its window.
pub fn match_template(
    image: &BinaryImage,
    template: &BinaryImage,
    backend: Backend,
    params: &SdtParams,
    seed: u64,
) -> Result<MatchField> {
    check_fits(image, template)?;
    let maps = SetDistanceMaps::compute(image, backend, params, seed);
    match_with_maps(&maps, template)
}

fn check_fits(image: &BinaryImage, template: &BinaryImage) -> Result<()> {
    if template.width() > image.width() || template.height() > image.height() || template.is_empty() {
        return Err(Error::TemplateTooLarge {
            template: template.dims(),
            image: image.dims(),
        });
    }
    Ok(())
}

/// [`match_template`] against precomputed image maps.
pub fn match_with_maps(maps: &SetDistanceMaps, template: &BinaryImage) -> Result<MatchField> {
    let (iw, ih) = maps.dims();
    let (tw, th) = template.dims();
    if tw > iw || th > ih || template.is_empty() {
        return Err(Error::TemplateTooLarge {
            template: (tw, th),
            image: (iw, ih),
        });
    }
    let (fw, fh) = (iw - tw + 1, ih - th + 1);
    let fg = maps.foreground.values();
    let bg = maps.background.values();
    let mask = template.mask();
    let mut values = vec![0.0; fw * fh];
    par::for_each_row(&mut values, fw, |oy, row| {
        for (ox, out) in row.iter_mut().enumerate() {
            let mut sum = 0.0;
            for ty in 0..th {
                let base = (oy + ty) * iw + ox;
                let trow = &mask[ty * tw..(ty + 1) * tw];
                for (tx, &m) in trow.iter().enumerate() {
                    sum += if m { fg[base + tx] } else { bg[base + tx] };
                }
            }
            *out = sum;
        }
    });
    MatchField::from_values(fw, fh, values)
}

/// Local minima of a [`MatchField`] and the catchment basin of the global one.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimaReport {
    /// One representative offset per minimum: its smallest `(x, y)` cell.
    pub minima: Vec<(usize, usize)>,
    /// Index into `minima`.
    pub global_index: usize,
    pub global_min: (usize, usize),
    pub global_value: f64,
    pub nom: usize,
    pub cb_size: usize,
    /// Per offset, `1 + index` of the minimum its descent reaches.
    pub cb_labels: LabelMap,
}

impl MinimaReport {
    /// Catchment basin of the global minimum as a percentage of all offsets.
    pub fn cb_percent(&self) -> f64 {
        100.0 * self.cb_size as f64 / self.cb_labels.labels().len() as f64
    }

    /// A summary row and the list of minima.
    pub fn to_csv(&self, field: &MatchField) -> String {
        let mut out = String::from("nom,cb_size,cb_percent,global_x,global_y,global_value\n");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            self.nom,
            self.cb_size,
            self.cb_percent(),
            self.global_min.0,
            self.global_min.1,
            self.global_value
        );
        out.push_str("\nminimum,offset_x,offset_y,value,basin_size\n");
        let areas = self.cb_labels.areas();
        for (i, &(x, y)) in self.minima.iter().enumerate() {
            let basin = areas.get(i + 1).copied().unwrap_or(0);
            let _ = writeln!(out, "{},{},{},{},{}", i + 1, x, y, field.get(x, y), basin);
        }
        out
    }
}

/// Neighbour scan order for steepest descent: N, NE, E, SE, S, SW, W, NW.
pub const DESCENT_ORDER: [(i64, i64); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

fn neighbours(w: usize, h: usize, p: usize) -> impl Iterator<Item = usize> {
    let (x, y) = ((p % w) as i64, (p / w) as i64);
    DESCENT_ORDER.iter().filter_map(move |&(dx, dy)| {
        let (nx, ny) = (x + dx, y + dy);
        (nx >= 0 && ny >= 0 && nx < w as i64 && ny < h as i64).then(|| ny as usize * w + nx as usize)
    })
}

/// Finds all local minima and the descent basin of every offset.
///
/// * Plateaus are 8-connected regions of equal value. A plateau is a minimum
///   iff none of its cells has a strictly lower 8-neighbour.
/// * A cell with a strictly lower neighbour steps to its lowest neighbour;
///   ties go to the first in [`DESCENT_ORDER`].
/// * A cell on a non-minimal plateau steps along a shortest path inside the
///   plateau towards the nearest cell that has a lower neighbour.
/// * The global minimum is the lowest minimum, ties broken by smallest
///   `(x, y)` offset.
pub fn analyze_minima(field: &MatchField) -> Result<MinimaReport> {
    if field.is_empty() {
        return Err(Error::EmptyField);
    }
    let (w, h) = field.dims();
    let v = field.values();
    let n = v.len();

    // plateau ids
    let mut plateau = vec![usize::MAX; n];
    let mut plateau_cells: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if plateau[start] != usize::MAX {
            continue;
        }
        let id = plateau_cells.len();
        let mut cells = vec![start];
        plateau[start] = id;
        let mut i = 0;
        while i < cells.len() {
            let p = cells[i];
            i += 1;
            for q in neighbours(w, h, p) {
                if plateau[q] == usize::MAX && v[q] == v[p] {
                    plateau[q] = id;
                    cells.push(q);
                }
            }
        }
        plateau_cells.push(cells);
    }

    // steepest strictly-lower neighbour per cell
    let lower: Vec<Option<usize>> = (0..n)
        .map(|p| {
            let mut best: Option<usize> = None;
            for q in neighbours(w, h, p) {
                if v[q] < v[p] && best.is_none_or(|b| v[q] < v[b]) {
                    best = Some(q);
                }
            }
            best
        })
        .collect();

    // next step for every cell; None marks a cell on a minimal plateau
    let mut next: Vec<Option<usize>> = lower.clone();
    let mut is_minimum = vec![false; plateau_cells.len()];
    let mut seen = vec![false; n];
    for (id, cells) in plateau_cells.iter().enumerate() {
        let exits: Vec<usize> = cells.iter().copied().filter(|&p| lower[p].is_some()).collect();
        if exits.is_empty() {
            is_minimum[id] = true;
            continue;
        }
        // multi-source BFS from exits, restricted to the plateau
        let mut queue: VecDeque<usize> = VecDeque::new();
        if cells.len() > 1 {
            for &e in &exits {
                seen[e] = true;
                queue.push_back(e);
            }
            while let Some(p) = queue.pop_front() {
                for q in neighbours(w, h, p) {
                    if plateau[q] == id && !seen[q] {
                        seen[q] = true;
                        next[q] = Some(p);
                        queue.push_back(q);
                    }
                }
            }
        }
    }

    // minima ordered by representative offset (x, y)
    let mut min_ids: Vec<usize> = (0..plateau_cells.len()).filter(|&id| is_minimum[id]).collect();
    let representative = |id: usize| {
        plateau_cells[id]
            .iter()
            .map(|&p| (p % w, p / w))
            .min()
            .expect("non-empty plateau")
    };
    min_ids.sort_by_key(|&id| representative(id));
    let mut label_of_plateau = vec![0u32; plateau_cells.len()];
    for (i, &id) in min_ids.iter().enumerate() {
        label_of_plateau[id] = i as u32 + 1;
    }

    // follow descent pointers with memoization
    let mut labels = vec![0u32; n];
    let mut path = Vec::new();
    for start in 0..n {
        let mut p = start;
        while labels[p] == 0 {
            match next[p] {
                Some(q) => {
                    path.push(p);
                    p = q;
                }
                None => {
                    labels[p] = label_of_plateau[plateau[p]];
                }
            }
        }
        let l = labels[p];
        for q in path.drain(..) {
            labels[q] = l;
        }
    }

    let minima: Vec<(usize, usize)> = min_ids.iter().map(|&id| representative(id)).collect();
    let global_index = (0..minima.len())
        .min_by(|&a, &b| {
            let (va, vb) = (field.get(minima[a].0, minima[a].1), field.get(minima[b].0, minima[b].1));
            va.total_cmp(&vb).then(minima[a].cmp(&minima[b]))
        })
        .expect("at least one minimum");
    let global_min = minima[global_index];
    let global_label = global_index as u32 + 1;
    let cb_size = labels.iter().filter(|&&l| l == global_label).count();
    Ok(MinimaReport {
        nom: minima.len(),
        global_index,
        global_min,
        global_value: field.get(global_min.0, global_min.1),
        minima,
        cb_size,
        cb_labels: LabelMap::from_labels(w, h, labels)?,
    })
}
