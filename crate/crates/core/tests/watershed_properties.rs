use std::collections::HashMap;
use std::f64::consts::PI;

use proptest::prelude::*;
use sdt_core::synth::digitize_disks;
use sdt_core::watershed::{extract_seeds, internal_distance, segment, watershed_segment};
use sdt_core::{Backend, BinaryImage, DistanceMap, LabelMap, SdtParams};

const R: f64 = 3.0 * PI;

fn dt_params(w: usize, h: usize) -> SdtParams {
    SdtParams::for_domain(0.0, w, h).unwrap()
}

/// Distance from each object pixel to the nearest background pixel, by scan.
fn brute_internal(object: &BinaryImage) -> Vec<f64> {
    let (w, h) = object.dims();
    let bg: Vec<(usize, usize)> = object.complement().points().collect();
    (0..w * h)
        .map(|p| {
            if !object.mask()[p] {
                return 0.0;
            }
            let (x, y) = ((p % w) as f64, (p / w) as f64);
            bg.iter()
                .map(|&(bx, by)| ((bx as f64 - x).powi(2) + (by as f64 - y).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Pixels of 4-connected plateaus with no strictly higher object neighbour.
fn brute_regional_maxima(values: &[f64], object: &BinaryImage) -> Vec<Vec<usize>> {
    let (w, h) = object.dims();
    let nb = |p: usize| {
        let (x, y) = (p % w, p / w);
        let mut v = Vec::new();
        if x > 0 { v.push(p - 1) }
        if x + 1 < w { v.push(p + 1) }
        if y > 0 { v.push(p - w) }
        if y + 1 < h { v.push(p + w) }
        v.into_iter().filter(|&q| object.mask()[q]).collect::<Vec<_>>()
    };
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    for s in 0..w * h {
        if !object.mask()[s] || seen[s] {
            continue;
        }
        let mut region = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < region.len() {
            let p = region[i];
            i += 1;
            for q in nb(p) {
                if !seen[q] && values[q] == values[p] {
                    seen[q] = true;
                    region.push(q);
                }
            }
        }
        if region.iter().all(|&p| nb(p).iter().all(|&q| values[q] <= values[p])) {
            out.push(region);
        }
    }
    out
}

/// True iff the two labelings agree up to a bijection of labels.
fn same_partition(a: &[u32], b: &[u32]) -> bool {
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| {
        *fwd.entry(x).or_insert(y) == y && *back.entry(y).or_insert(x) == x
    })
}

#[test]
fn disk_internal_distance_matches_scan_and_radius() {
    for (i, &(cx, cy)) in [(20.0, 20.0), (20.37, 19.81), (21.5, 20.5), (19.93, 20.12)].iter().enumerate() {
        let obj = digitize_disks((cx, cy), (cx, cy), R, 40, 40).unwrap();
        let d = internal_distance(&obj, Backend::Dt, &dt_params(40, 40), 0).unwrap();
        for (a, b) in d.values().iter().zip(brute_internal(&obj)) {
            assert!((a - b).abs() < 1e-9);
        }
        let max = d.values().iter().copied().fold(0.0, f64::max);
        assert!(max >= R - 1.0 && max <= R + 0.5, "case {i}: max {max}");
    }
}

#[test]
fn single_disk_seeds_sit_at_the_centre() {
    for &(cx, cy) in &[(20.0, 20.0), (20.37, 19.81), (21.5, 20.5), (19.93, 20.12), (20.61, 20.77)] {
        let obj = digitize_disks((cx, cy), (cx, cy), R, 40, 40).unwrap();
        let d = internal_distance(&obj, Backend::Dt, &dt_params(40, 40), 0).unwrap();
        let seeds = extract_seeds(&d, &obj, 0.0).unwrap();
        let maxima = brute_regional_maxima(d.values(), &obj);
        assert!(seeds.max_label() >= 1);
        assert_eq!(seeds.max_label() as usize, maxima.len());
        let centre = (cx.floor() as i64, cy.floor() as i64);
        for (p, &l) in seeds.labels().iter().enumerate() {
            if l > 0 {
                let (x, y) = ((p % 40) as i64, (p / 40) as i64);
                assert!((x - centre.0).abs() <= 1 && (y - centre.1).abs() <= 1, "seed ({x}, {y}) for centre {centre:?}");
            }
        }
    }
}

#[test]
fn tangent_disks_give_two_seeds() {
    for &(jx, jy) in &[(0.0, 0.0), (0.31, 0.72), (0.55, 0.12), (0.9, 0.45)] {
        let c1 = (22.0 + jx - R, 22.0 + jy);
        let c2 = (c1.0 + 2.0 * R, c1.1);
        let obj = digitize_disks(c1, c2, R, 44, 44).unwrap();
        let d = internal_distance(&obj, Backend::Dt, &dt_params(44, 44), 0).unwrap();
        let seeds = extract_seeds(&d, &obj, 0.0).unwrap();
        assert_eq!(seeds.max_label(), 2);
        assert_eq!(brute_regional_maxima(d.values(), &obj).len(), 2);
    }
}

#[test]
fn overlapping_disks_split_along_the_bisector() {
    for &(jx, jy) in &[(0.0, 0.0), (0.25, 0.5), (0.5, 0.5), (0.8, 0.1)] {
        let delta = 1.5 * R;
        let c1 = (32.0 + jx - delta / 2.0, 24.0 + jy);
        let c2 = (c1.0 + delta, c1.1);
        let obj = digitize_disks(c1, c2, R, 64, 48).unwrap();
        let r = segment(&obj, Backend::Dt, &dt_params(64, 48), 0, 0.25).unwrap();
        assert_eq!(r.segment_count, 2);
        let bisector = (c1.0 + c2.0) / 2.0;
        let (wl, wr) = (r.labels.get(c1.0 as usize, c1.1 as usize), r.labels.get(c2.0 as usize, c2.1 as usize));
        assert_ne!(wl, wr);
        for (p, &l) in r.labels.labels().iter().enumerate() {
            if l == 0 {
                continue;
            }
            let px = (p % 64) as f64 + 0.5;
            if px < bisector - 1.0 {
                assert_eq!(l, wl);
            } else if px > bisector + 1.0 {
                assert_eq!(l, wr);
            }
        }
    }
}

fn distinct_field(w: usize, h: usize) -> impl Strategy<Value = (BinaryImage, DistanceMap)> {
    (prop::collection::vec(prop::bool::weighted(0.8), w * h), Just(()))
        .prop_map(move |(mask, _)| {
            let obj = BinaryImage::from_mask(w, h, mask).unwrap();
            // distinct values, symmetric under mirroring only by construction of the mirror
            let values = (0..w * h)
                .map(|p| if obj.mask()[p] { 1.0 + ((p * 7919) % 1009) as f64 + (p as f64) * 1e-6 } else { 0.0 })
                .collect();
            (obj, DistanceMap::from_values(w, h, values).unwrap())
        })
}

fn flip_map(d: &DistanceMap) -> DistanceMap {
    let (w, h) = d.dims();
    let values = (0..w * h).map(|p| d.get(w - 1 - p % w, p / w)).collect();
    DistanceMap::from_values(w, h, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mirroring_the_input_mirrors_the_segmentation((obj, dist) in distinct_field(14, 11), h in prop::sample::select(vec![0.0, 50.0, 300.0])) {
        prop_assume!(obj.count() > 0);
        let seeds = extract_seeds(&dist, &obj, h).unwrap();
        let r = watershed_segment(&dist, &seeds, &obj).unwrap();
        let (fo, fd) = (obj.flip_horizontal(), flip_map(&dist));
        let fseeds = extract_seeds(&fd, &fo, h).unwrap();
        let fr = watershed_segment(&fd, &fseeds, &fo).unwrap();
        prop_assert_eq!(r.segment_count, fr.segment_count);
        prop_assert!(same_partition(r.labels.flip_horizontal().labels(), fr.labels.labels()));
    }

    #[test]
    fn permuting_seed_labels_permutes_output((obj, dist) in distinct_field(12, 12), shift in 1u32..50) {
        prop_assume!(obj.count() > 0);
        let seeds = extract_seeds(&dist, &obj, 0.0).unwrap();
        let n = seeds.max_label();
        // reverse the label order and offset it
        let permuted: Vec<u32> = seeds.labels().iter().map(|&l| if l == 0 { 0 } else { n + 1 - l + shift }).collect();
        let permuted = LabelMap::from_labels(12, 12, permuted).unwrap();
        let a = watershed_segment(&dist, &seeds, &obj).unwrap();
        let b = watershed_segment(&dist, &permuted, &obj).unwrap();
        prop_assert_eq!(a.segment_count, b.segment_count);
        for (x, y) in a.labels.labels().iter().zip(b.labels.labels()) {
            if *x == 0 || *x > n {
                prop_assert_eq!(*x == 0, *y == 0);
            } else {
                prop_assert_eq!(*y, n + 1 - x + shift);
            }
        }
    }

    #[test]
    fn every_object_pixel_is_labeled((obj, dist) in distinct_field(10, 10)) {
        prop_assume!(obj.count() > 0);
        let seeds = extract_seeds(&dist, &obj, 100.0).unwrap();
        let r = watershed_segment(&dist, &seeds, &obj).unwrap();
        for (p, &m) in obj.mask().iter().enumerate() {
            prop_assert_eq!(m, r.labels.labels()[p] != 0);
        }
        prop_assert_eq!(r, watershed_segment(&dist, &seeds, &obj).unwrap());
    }
}
