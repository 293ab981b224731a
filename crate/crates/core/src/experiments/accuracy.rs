//! Distance-map accuracy under salt noise.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{aade, check_reps, CurveTable, MeanSd};
use crate::edt::saturated_edt;
use crate::error::Result;
use crate::par;
use crate::rng::{self, DEFAULT_SEED};
use crate::sdt::{default_d_max, SdtParams, DEFAULT_MASS, DEFAULT_REALIZATIONS};
use crate::synth::{add_noise_points, synth_letter, Glyph};
use crate::transform::{transform, Backend};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AccuracyConfig {
    pub repetitions: usize,
    pub seed: u64,
    /// Probability that a background pixel turns into a noise point.
    pub p: f64,
    pub rho: f64,
    pub n_realizations: usize,
    pub mass: f64,
    /// Side length of the square glyph images.
    pub size: usize,
    /// Saturation distance; the image diagonal when absent.
    pub d_max: Option<f64>,
    pub glyphs: Vec<Glyph>,
}

impl Default for AccuracyConfig {
    fn default() -> Self {
        AccuracyConfig {
            repetitions: 100,
            seed: DEFAULT_SEED,
            p: 0.001,
            rho: 0.75,
            n_realizations: DEFAULT_REALIZATIONS,
            mass: DEFAULT_MASS,
            size: 256,
            d_max: None,
            glyphs: vec![Glyph::A, Glyph::XPointCloud],
        }
    }
}

impl AccuracyConfig {
    pub fn params(&self) -> Result<SdtParams> {
        let d_max = self.d_max.unwrap_or_else(|| default_d_max(self.size, self.size));
        SdtParams::new(self.rho, d_max)?
            .with_realizations(self.n_realizations)?
            .with_mass(self.mass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccuracySummary {
    pub glyph: Glyph,
    pub backend: Backend,
    pub mean: f64,
    pub sd: f64,
}

/// Per-repetition AADE for every glyph and backend.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub config: AccuracyConfig,
    /// `(glyph, backend, one AADE per repetition)`.
    pub samples: Vec<(Glyph, Backend, Vec<f64>)>,
}

impl AccuracyReport {
    pub fn samples_for(&self, glyph: Glyph, backend: Backend) -> Option<&[f64]> {
        self.samples
            .iter()
            .find(|(g, b, _)| *g == glyph && *b == backend)
            .map(|(_, _, v)| v.as_slice())
    }

    pub fn summary(&self) -> Vec<AccuracySummary> {
        self.samples
            .iter()
            .map(|(glyph, backend, v)| {
                let s = MeanSd::of(v);
                AccuracySummary {
                    glyph: *glyph,
                    backend: *backend,
                    mean: s.mean,
                    sd: s.sd,
                }
            })
            .collect()
    }

    /// `glyph,backend,mean_aade,sd_aade,reps`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("glyph,backend,mean_aade,sd_aade,reps\n");
        for s in self.summary() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                s.glyph.name(),
                s.backend,
                s.mean,
                s.sd,
                self.config.repetitions
            );
        }
        out
    }

    /// Per-repetition AADE of one backend, one series per glyph.
    pub fn table(&self, backend: Backend) -> CurveTable {
        let reps = self.config.repetitions;
        let mut t = CurveTable::new("repetition", (0..reps).map(|r| r as f64).collect(), vec![1; reps])
            .expect("matching lengths");
        for (glyph, b, v) in &self.samples {
            if *b == backend {
                t.push_series(format!("aade_{}", glyph.name()), v.clone())
                    .expect("one value per repetition");
            }
        }
        t
    }
}

/// For each glyph and repetition: add salt noise with probability `p`, compute
/// every backend's map of the noisy image and its AADE against the saturated
/// EDT of the clean glyph.
///
/// Repetition `r` of glyph `g` draws its noise from
/// `stream(derive_seed(derive_seed(seed, g), r), 0)` and its Monte Carlo seed is
/// `derive_seed(that, 1)`.
pub fn run_accuracy_experiment(cfg: &AccuracyConfig) -> Result<AccuracyReport> {
    check_reps(cfg.repetitions)?;
    let params = cfg.params()?;
    let mut samples = Vec::new();
    for (gi, &glyph) in cfg.glyphs.iter().enumerate() {
        let clean = synth_letter(glyph, cfg.size, cfg.size);
        let reference = saturated_edt(&clean, params.d_max());
        let glyph_seed = rng::derive_seed(cfg.seed, gi as u64);
        let per_rep: Vec<Result<[f64; 3]>> = par::map_indices(cfg.repetitions, |r| {
            let rep_seed = rng::derive_seed(glyph_seed, r as u64);
            let noisy = add_noise_points(&clean, cfg.p, &mut rng::stream(rep_seed, 0))?;
            let mut out = [0.0; 3];
            for (slot, backend) in out.iter_mut().zip(Backend::ALL) {
                let map = transform(&noisy, backend, &params, rng::derive_seed(rep_seed, 1));
                *slot = aade(&map, &reference)?;
            }
            Ok(out)
        });
        let per_rep = per_rep.into_iter().collect::<Result<Vec<_>>>()?;
        for (bi, backend) in Backend::ALL.into_iter().enumerate() {
            samples.push((glyph, backend, per_rep.iter().map(|v| v[bi]).collect()));
        }
    }
    Ok(AccuracyReport {
        config: cfg.clone(),
        samples,
    })
}
