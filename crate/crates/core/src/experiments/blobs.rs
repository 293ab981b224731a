//! Watershed over-segmentation check on the noisy multi-blob scene.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::image::{BinaryImage, LabelMap};
use crate::rng::{self, DEFAULT_SEED};
use crate::sdt::{SdtParams, DEFAULT_MASS, DEFAULT_REALIZATIONS};
use crate::synth::{add_gaussian_noise, blob_scene};
use crate::transform::Backend;
use crate::watershed::segment;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlobDemoConfig {
    pub seed: u64,
    pub sigma: f64,
    pub threshold: f64,
    pub rho: f64,
    pub d_max: f64,
    pub h: f64,
    pub n_realizations: usize,
    pub mass: f64,
}

impl Default for BlobDemoConfig {
    fn default() -> Self {
        BlobDemoConfig {
            seed: DEFAULT_SEED,
            sigma: 0.1,
            threshold: 0.35,
            rho: 0.95,
            d_max: 256.0,
            h: 0.5,
            n_realizations: DEFAULT_REALIZATIONS,
            mass: DEFAULT_MASS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlobDemoReport {
    pub true_count: usize,
    pub object: BinaryImage,
    /// Segment count and labels per backend, in [`Backend::ALL`] order.
    pub results: Vec<(Backend, usize, LabelMap)>,
}

impl BlobDemoReport {
    pub fn count(&self, backend: Backend) -> Option<usize> {
        self.results.iter().find(|(b, _, _)| *b == backend).map(|(_, c, _)| *c)
    }

    /// `backend,segments,true_count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("backend,segments,true_count\n");
        for (backend, count, _) in &self.results {
            let _ = writeln!(out, "{backend},{count},{}", self.true_count);
        }
        out
    }
}

/// Adds Gaussian noise (`stream(seed, 0)`) to the bundled blob scene,
/// thresholds it and segments the result with every backend. Monte Carlo uses
/// `derive_seed(seed, 1)`.
pub fn watershed_demo(cfg: &BlobDemoConfig) -> Result<BlobDemoReport> {
    let (scene, true_count) = blob_scene();
    let object = add_gaussian_noise(&scene, cfg.sigma, &mut rng::stream(cfg.seed, 0))?.threshold(cfg.threshold);
    let params = SdtParams::new(cfg.rho, cfg.d_max)?
        .with_realizations(cfg.n_realizations)?
        .with_mass(cfg.mass)?;
    let mut results = Vec::new();
    for backend in Backend::ALL {
        let r = segment(&object, backend, &params, rng::derive_seed(cfg.seed, 1), cfg.h)?;
        results.push((backend, r.segment_count, r.labels));
    }
    Ok(BlobDemoReport {
        true_count,
        object,
        results,
    })
}
