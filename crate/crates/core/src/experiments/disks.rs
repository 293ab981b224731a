//! Separation of two overlapping disks by watershed segmentation.

use serde::{Deserialize, Serialize};

use super::{check_reps, CurveTable};
use crate::error::{Error, Result};
use crate::par;
use crate::rng::{self, DEFAULT_SEED};
use crate::sdt::{default_d_max, SdtParams, DEFAULT_MASS, DEFAULT_REALIZATIONS};
use crate::synth::digitize_disks;
use crate::transform::Backend;
use crate::watershed::segment;

/// Segment counts at or above this value share the last column.
pub const MAX_COUNT_COLUMN: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisksConfig {
    pub repetitions: usize,
    pub seed: u64,
    pub radius: f64,
    /// Centre distances are `i * step_fraction * radius` for `i = 1..=steps`.
    pub steps: usize,
    pub step_fraction: f64,
    /// Side length of the square domain.
    pub domain: usize,
    pub rho: f64,
    /// h-maxima merge tolerance for seeding.
    pub h: f64,
    pub n_realizations: usize,
    pub mass: f64,
    /// Saturation distance; the domain diagonal when absent.
    pub d_max: Option<f64>,
}

impl Default for DisksConfig {
    fn default() -> Self {
        DisksConfig {
            repetitions: 200,
            seed: DEFAULT_SEED,
            radius: 3.0 * std::f64::consts::PI,
            steps: 40,
            step_fraction: 0.05,
            domain: 64,
            rho: 0.75,
            h: 0.25,
            n_realizations: DEFAULT_REALIZATIONS,
            mass: DEFAULT_MASS,
            d_max: None,
        }
    }
}

impl DisksConfig {
    pub fn deltas(&self) -> Vec<f64> {
        (1..=self.steps)
            .map(|i| i as f64 * self.step_fraction * self.radius)
            .collect()
    }

    pub fn params(&self) -> Result<SdtParams> {
        let d_max = self.d_max.unwrap_or_else(|| default_d_max(self.domain, self.domain));
        SdtParams::new(self.rho, d_max)?
            .with_realizations(self.n_realizations)?
            .with_mass(self.mass)
    }
}

/// Segment-count frequencies per centre distance, one table per backend.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisksReport {
    pub config: DisksConfig,
    pub tables: Vec<(Backend, CurveTable)>,
}

impl DisksReport {
    pub fn table(&self, backend: Backend) -> Option<&CurveTable> {
        self.tables.iter().find(|(b, _)| *b == backend).map(|(_, t)| t)
    }
}

/// Segment counts of one placement for every backend, in [`Backend::ALL`]
/// order. The pair is rigidly jittered by `jitter` in `[0, 1)^2`: the first
/// centre sits at the domain centre plus the jitter minus `delta / 2` along x,
/// the second `delta` further along x.
pub fn disk_trial(cfg: &DisksConfig, params: &SdtParams, delta: f64, jitter: (f64, f64), seed: u64) -> Result<[usize; 3]> {
    let mid = cfg.domain as f64 / 2.0;
    let c1 = (mid + jitter.0 - delta / 2.0, mid + jitter.1);
    let c2 = (c1.0 + delta, c1.1);
    let object = digitize_disks(c1, c2, cfg.radius, cfg.domain, cfg.domain)?;
    let mut counts = [0; 3];
    for (slot, backend) in counts.iter_mut().zip(Backend::ALL) {
        *slot = segment(&object, backend, params, seed, cfg.h)?.segment_count;
    }
    Ok(counts)
}

/// For every centre distance and repetition, digitize a randomly placed disk
/// pair, segment it with each backend and record the segment count.
///
/// Trial `(i, r)` draws its jitter from `stream(derive_seed(seed, i * reps + r), 0)`
/// and uses `derive_seed` of that seed and 1 for Monte Carlo. Each table holds
/// `freq_1` to `freq_5` and `freq_6plus`.
pub fn run_disks_experiment(cfg: &DisksConfig) -> Result<DisksReport> {
    check_reps(cfg.repetitions)?;
    if cfg.steps == 0 {
        return Err(Error::InvalidParameter("the distance grid is empty".into()));
    }
    let params = cfg.params()?;
    let deltas = cfg.deltas();
    let reps = cfg.repetitions;
    let trials: Vec<Result<[usize; 3]>> = par::map_indices(deltas.len() * reps, |t| {
        use rand::Rng;
        let trial_seed = rng::derive_seed(cfg.seed, t as u64);
        let mut r = rng::stream(trial_seed, 0);
        let jitter = (r.random::<f64>(), r.random::<f64>());
        disk_trial(cfg, &params, deltas[t / reps], jitter, rng::derive_seed(trial_seed, 1))
    });
    let trials = trials.into_iter().collect::<Result<Vec<_>>>()?;

    let mut tables = Vec::new();
    for (bi, backend) in Backend::ALL.into_iter().enumerate() {
        let mut freq = vec![vec![0.0; deltas.len()]; MAX_COUNT_COLUMN];
        for (t, counts) in trials.iter().enumerate() {
            let column = counts[bi].clamp(1, MAX_COUNT_COLUMN) - 1;
            freq[column][t / reps] += 1.0 / reps as f64;
        }
        let mut table = CurveTable::new("delta", deltas.clone(), vec![reps; deltas.len()])?;
        table.push_series(
            "delta_over_r",
            deltas.iter().map(|d| d / cfg.radius).collect(),
        )?;
        for (c, values) in freq.into_iter().enumerate() {
            let name = if c + 1 == MAX_COUNT_COLUMN {
                format!("freq_{MAX_COUNT_COLUMN}plus")
            } else {
                format!("freq_{}", c + 1)
            };
            table.push_series(name, values)?;
        }
        tables.push((backend, table));
    }
    Ok(DisksReport {
        config: cfg.clone(),
        tables,
    })
}

/// Mean of the `freq_2` series over the distance grid.
pub fn auc_two_segments(curve: &CurveTable) -> Result<f64> {
    let series = curve
        .series("freq_2")
        .ok_or_else(|| Error::MissingSeries("freq_2".into()))?;
    if series.is_empty() {
        return Err(Error::MissingSeries("freq_2 is empty".into()));
    }
    Ok(series.iter().sum::<f64>() / series.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_with(values: Vec<f64>) -> CurveTable {
        let n = values.len();
        let mut t = CurveTable::new("delta", (0..n).map(|i| i as f64).collect(), vec![1; n]).unwrap();
        t.push_series("freq_2", values).unwrap();
        t
    }

    #[test]
    fn auc_extremes() {
        assert_eq!(auc_two_segments(&table_with(vec![1.0; 40])).unwrap(), 1.0);
        assert_eq!(auc_two_segments(&table_with(vec![0.0; 40])).unwrap(), 0.0);
        let empty = CurveTable::new("delta", vec![1.0], vec![1]).unwrap();
        assert!(matches!(auc_two_segments(&empty), Err(Error::MissingSeries(_))));
    }

    #[test]
    fn default_grid() {
        let d = DisksConfig::default().deltas();
        assert_eq!(d.len(), 40);
        let r = 3.0 * std::f64::consts::PI;
        assert!((d[0] - 0.05 * r).abs() < 1e-12);
        assert!((d[39] - 2.0 * r).abs() < 1e-12);
    }

    #[test]
    fn frequencies_sum_to_one() {
        let cfg = DisksConfig {
            repetitions: 3,
            steps: 4,
            step_fraction: 0.5,
            n_realizations: 20,
            ..DisksConfig::default()
        };
        let report = run_disks_experiment(&cfg).unwrap();
        assert_eq!(report.tables.len(), 3);
        for (_, t) in &report.tables {
            for i in 0..4 {
                let total: f64 = t.series.iter().skip(1).map(|(_, v)| v[i]).sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(report, run_disks_experiment(&cfg).unwrap());
    }
}
