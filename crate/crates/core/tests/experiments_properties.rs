use proptest::prelude::*;
use sdt_core::experiments::{aade, auc_two_segments, disk_trial, run_template_experiment, DisksConfig, TemplateConfig};
use sdt_core::DistanceMap;

fn map(values: Vec<f64>) -> DistanceMap {
    DistanceMap::from_values(values.len(), 1, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn aade_is_a_normalized_l1_metric(
        a in prop::collection::vec(0.0f64..50.0, 30),
        b in prop::collection::vec(0.0f64..50.0, 30),
        c in prop::collection::vec(0.0f64..50.0, 30),
    ) {
        let (ma, mb, mc) = (map(a.clone()), map(b.clone()), map(c));
        let direct = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 30.0;
        let ab = aade(&ma, &mb).unwrap();
        prop_assert!((ab - direct).abs() < 1e-12);
        prop_assert_eq!(ab, aade(&mb, &ma).unwrap());
        prop_assert!(ab <= aade(&ma, &mc).unwrap() + aade(&mc, &mb).unwrap() + 1e-12);
        prop_assert_eq!(aade(&ma, &ma).unwrap(), 0.0);
    }
}

#[test]
fn aade_rejects_mismatched_shapes() {
    assert!(aade(&map(vec![0.0; 3]), &map(vec![0.0; 4])).is_err());
}

#[test]
fn separated_disks_give_two_segments_and_merged_disks_one() {
    let cfg = DisksConfig { n_realizations: 60, ..DisksConfig::default() };
    let params = cfg.params().unwrap();
    let r = cfg.radius;
    for (i, &jitter) in [(0.0, 0.0), (0.4, 0.7), (0.85, 0.25)].iter().enumerate() {
        let far = disk_trial(&cfg, &params, 2.0 * r, jitter, i as u64).unwrap();
        assert!(far.iter().all(|&c| c >= 2), "{far:?}");
        let near = disk_trial(&cfg, &params, 0.05 * r, jitter, i as u64).unwrap();
        assert_eq!(near, [1, 1, 1]);
    }
}

#[test]
fn disk_frequencies_are_distributions_and_auc_lies_in_unit_interval() {
    let cfg = DisksConfig { repetitions: 2, steps: 5, step_fraction: 0.4, n_realizations: 30, ..DisksConfig::default() };
    let report = sdt_core::experiments::run_disks_experiment(&cfg).unwrap();
    for (_, t) in &report.tables {
        for i in 0..5 {
            let total: f64 = t.series.iter().filter(|(n, _)| n.starts_with("freq_")).map(|(_, v)| v[i]).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        let auc = auc_two_segments(t).unwrap();
        assert!((0.0..=1.0).contains(&auc));
    }
}

#[test]
fn noise_free_template_search_is_exact() {
    let cfg = TemplateConfig { repetitions: 2, sigma: 0.0, rhos: vec![0.0, 0.5], n_realizations: 30, ..TemplateConfig::default() };
    let t = run_template_experiment(&cfg).unwrap();
    assert_eq!(t.series("found_fraction").unwrap(), &[1.0, 1.0]);
    // identical inputs on every repetition leave no spread
    assert_eq!(t.series("nom_sd").unwrap(), &[0.0, 0.0]);
    println!("noise-free nom {:?}", t.series("nom_mean").unwrap());
}
