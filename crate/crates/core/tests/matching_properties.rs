mod common;

use common::{brute_edt, image_strategy};
use proptest::prelude::*;
use sdt_core::matching::{analyze_minima, match_template, smd_distance, MatchField, SetDistanceMaps, DESCENT_ORDER};
use sdt_core::rng;
use sdt_core::synth::{add_noise_points, synth_letter, Glyph};
use sdt_core::{Backend, BinaryImage, SdtParams};

/// Direct double loop: foreground of `a` to the foreground of `b`, background
/// of `a` to the background of `b`, each saturated at `d_max`.
fn brute_smd(a: &BinaryImage, b: &BinaryImage, d_max: f64) -> f64 {
    let fg = brute_edt(b);
    let bg = brute_edt(&b.complement());
    a.mask()
        .iter()
        .enumerate()
        .map(|(p, &m)| if m { fg[p] } else { bg[p] }.min(d_max))
        .sum()
}

/// Greedy steepest descent on a field without ties, followed cell by cell.
fn descend(field: &MatchField, start: (usize, usize)) -> (usize, usize) {
    let (w, h) = field.dims();
    let mut p = start;
    loop {
        let mut best = p;
        for (dx, dy) in DESCENT_ORDER {
            let (nx, ny) = (p.0 as i64 + dx, p.1 as i64 + dy);
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let q = (nx as usize, ny as usize);
            if field.get(q.0, q.1) < field.get(best.0, best.1) {
                best = q;
            }
        }
        if best == p {
            return p;
        }
        p = best;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smd_matches_double_loop(a in image_strategy(8, 8, 0.3), b in image_strategy(8, 8, 0.3)) {
        let d_max = 6.5;
        let p = SdtParams::new(0.0, d_max).unwrap();
        let maps = SetDistanceMaps::compute(&b, Backend::Dt, &p, 0);
        let got = smd_distance(&a, &maps).unwrap();
        prop_assert!((got - brute_smd(&a, &b, d_max)).abs() < 1e-9);
    }

    #[test]
    fn catchment_basins_match_explicit_descent(values in prop::collection::vec(0.0f64..1000.0, 400)) {
        let field = MatchField::from_values(20, 20, values).unwrap();
        let report = analyze_minima(&field).unwrap();
        let total: usize = report.cb_labels.areas().iter().skip(1).sum();
        prop_assert_eq!(total, 400);
        prop_assert!(report.minima.contains(&report.global_min));
        prop_assert_eq!(report.nom, report.minima.len());
        for y in 0..20 {
            for x in 0..20 {
                let end = descend(&field, (x, y));
                let label = report.cb_labels.get(x, y) as usize;
                prop_assert_eq!(report.minima[label - 1], end);
            }
        }
        let global = report.global_index as u32 + 1;
        prop_assert_eq!(
            report.cb_size,
            report.cb_labels.labels().iter().filter(|&&l| l == global).count()
        );
    }

    #[test]
    fn descent_never_cycles_on_plateau_fields(values in prop::collection::vec(0u8..4, 144)) {
        let field = MatchField::from_values(12, 12, values.into_iter().map(f64::from).collect()).unwrap();
        let report = analyze_minima(&field).unwrap();
        prop_assert!(report.nom >= 1 && report.cb_size >= 1);
        prop_assert!(report.cb_labels.labels().iter().all(|&l| l >= 1 && l as usize <= report.nom));
        let global_value = field.get(report.global_min.0, report.global_min.1);
        prop_assert!(field.values().iter().all(|&v| v >= global_value));
    }
}

#[test]
fn field_equals_per_offset_recomputation() {
    let clean = synth_letter(Glyph::A, 64, 64);
    let image = add_noise_points(&clean, 0.01, &mut rng::stream(5, 0)).unwrap();
    let template = clean.crop(20, 24, 16, 16).unwrap();
    let p = SdtParams::for_domain(0.6, 64, 64).unwrap().with_realizations(24).unwrap();
    for backend in Backend::ALL {
        let field = match_template(&image, &template, backend, &p, 9).unwrap();
        assert_eq!(field.dims(), (49, 49));
        let maps = SetDistanceMaps::compute(&image, backend, &p, 9);
        for oy in (0..49).step_by(6) {
            for ox in (0..49).step_by(5) {
                let window = SetDistanceMaps {
                    foreground: maps.foreground.crop(ox, oy, 16, 16).unwrap(),
                    background: maps.background.crop(ox, oy, 16, 16).unwrap(),
                };
                let direct = smd_distance(&template, &window).unwrap();
                assert!((field.get(ox, oy) - direct).abs() < 1e-9, "{backend} at ({ox}, {oy})");
            }
        }
    }
}

#[test]
fn stochastic_fields_are_reproducible() {
    let img = synth_letter(Glyph::XPointCloud, 40, 40);
    let template = img.crop(10, 10, 12, 12).unwrap();
    let p = SdtParams::for_domain(0.5, 40, 40).unwrap().with_realizations(16).unwrap();
    let a = match_template(&img, &template, Backend::McSdt, &p, 4).unwrap();
    let b = match_template(&img, &template, Backend::McSdt, &p, 4).unwrap();
    assert_eq!(a, b);
}

#[test]
fn clean_dt_match_has_zero_global_minimum_at_the_cut() {
    let img = synth_letter(Glyph::A, 48, 48);
    let template = img.crop(9, 13, 20, 18).unwrap();
    let p = SdtParams::for_domain(0.0, 48, 48).unwrap();
    let field = match_template(&img, &template, Backend::Dt, &p, 0).unwrap();
    let report = analyze_minima(&field).unwrap();
    assert_eq!(report.global_min, (9, 13));
    assert_eq!(report.global_value, 0.0);
}
