//! Metrics and seeded experiment drivers.
//!
//! Every driver is a pure function of its configuration: repetitions draw from
//! child seeds of the master seed and results are aggregated in a fixed order,
//! so reruns produce identical tables regardless of thread count.

mod accuracy;
mod blobs;
mod disks;
mod template;

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::DistanceMap;

pub use accuracy::{run_accuracy_experiment, AccuracyConfig, AccuracyReport, AccuracySummary};
pub use blobs::{watershed_demo, BlobDemoConfig, BlobDemoReport};
pub use disks::{auc_two_segments, disk_trial, run_disks_experiment, DisksConfig, DisksReport, MAX_COUNT_COLUMN};
pub use template::{run_template_experiment, TemplateConfig};

/// Mean absolute per-pixel difference between two maps.
pub fn aade(computed: &DistanceMap, reference: &DistanceMap) -> Result<f64> {
    if computed.dims() != reference.dims() {
        return Err(Error::DimensionMismatch {
            expected: reference.dims(),
            found: computed.dims(),
        });
    }
    let n = computed.values().len();
    if n == 0 {
        return Ok(0.0);
    }
    let total: f64 = computed
        .values()
        .iter()
        .zip(reference.values())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(total / n as f64)
}

/// Sample mean and standard deviation (`n - 1` denominator; 0 for one sample).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

impl MeanSd {
    pub fn of(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return MeanSd { mean: f64::NAN, sd: f64::NAN };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let sd = if n < 2 {
            0.0
        } else {
            (samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        MeanSd { mean, sd }
    }
}

/// Named y-series over shared x-values, with the repetition count behind each
/// point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveTable {
    pub x_label: String,
    pub x: Vec<f64>,
    pub reps: Vec<usize>,
    pub series: Vec<(String, Vec<f64>)>,
}

impl CurveTable {
    pub fn new(x_label: impl Into<String>, x: Vec<f64>, reps: Vec<usize>) -> Result<Self> {
        if reps.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: (x.len(), 1),
                found: (reps.len(), 1),
            });
        }
        Ok(CurveTable {
            x_label: x_label.into(),
            x,
            reps,
            series: Vec::new(),
        })
    }

    pub fn push_series(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        if values.len() != self.x.len() {
            return Err(Error::DimensionMismatch {
                expected: (self.x.len(), 1),
                found: (values.len(), 1),
            });
        }
        self.series.push((name.into(), values));
        Ok(())
    }

    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    /// Header `x_label,reps,<series...>` then one row per x-value.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},reps", self.x_label);
        for (name, _) in &self.series {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, x) in self.x.iter().enumerate() {
            let _ = write!(out, "{},{}", x, self.reps[i]);
            for (_, values) in &self.series {
                let _ = write!(out, ",{}", values[i]);
            }
            out.push('\n');
        }
        out
    }
}

fn check_reps(reps: usize) -> Result<()> {
    if reps == 0 {
        return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
    }
    Ok(())
}
