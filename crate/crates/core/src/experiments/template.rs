//! Template matching on a noisy thresholded scene across a `rho` sweep.

use serde::{Deserialize, Serialize};

use super::{check_reps, CurveTable};
use crate::error::{Error, Result};
use crate::matching::{analyze_minima, match_with_maps, rho_sweep, SetDistanceMaps};
use crate::par;
use crate::rng::{self, DEFAULT_SEED};
use crate::sdt::{default_d_max, SdtParams, DEFAULT_MASS, DEFAULT_REALIZATIONS};
use crate::synth::{add_gaussian_noise, template_scene};
use crate::transform::Backend;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TemplateConfig {
    pub repetitions: usize,
    pub seed: u64,
    /// Standard deviation of the additive Gaussian noise.
    pub sigma: f64,
    pub threshold: f64,
    pub rhos: Vec<f64>,
    pub backend: Backend,
    pub n_realizations: usize,
    pub mass: f64,
    /// Saturation distance; the scene diagonal when absent.
    pub d_max: Option<f64>,
}

impl Default for TemplateConfig {
    fn default() -> Self {
        TemplateConfig {
            repetitions: 50,
            seed: DEFAULT_SEED,
            sigma: 0.1,
            threshold: 0.5,
            rhos: rho_sweep(),
            backend: Backend::DetSdt,
            n_realizations: DEFAULT_REALIZATIONS,
            mass: DEFAULT_MASS,
            d_max: None,
        }
    }
}

/// Per-run outcome at one `rho`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Run {
    nom: usize,
    cb_percent: f64,
    found: bool,
}

/// For each `rho` and repetition: add Gaussian noise to the bundled scene,
/// threshold it, match the template cut from the clean thresholded scene and
/// analyse the minima of the distance field.
///
/// Repetition `r` uses the same noise image for every `rho`
/// (`stream(seed, r)`), and the Monte Carlo seed `derive_seed(seed, r)`.
///
/// Series: `nom_mean`, `nom_sd`, `cb_percent_mean`, `cb_percent_sd` and
/// `found_fraction` (share of runs whose global minimum is the true offset).
pub fn run_template_experiment(cfg: &TemplateConfig) -> Result<CurveTable> {
    check_reps(cfg.repetitions)?;
    if cfg.rhos.is_empty() {
        return Err(Error::InvalidParameter("the rho sweep is empty".into()));
    }
    let scene = template_scene();
    let template = scene.template(cfg.threshold);
    let (w, h) = scene.image.dims();
    let d_max = cfg.d_max.unwrap_or_else(|| default_d_max(w, h));
    let base = SdtParams::new(0.0, d_max)?
        .with_realizations(cfg.n_realizations)?
        .with_mass(cfg.mass)?;
    let all_params = cfg
        .rhos
        .iter()
        .map(|&rho| base.clone().with_rho(rho))
        .collect::<Result<Vec<_>>>()?;

    let runs: Vec<Result<Vec<Run>>> = par::map_indices(cfg.repetitions, |r| {
        let noisy = add_gaussian_noise(&scene.image, cfg.sigma, &mut rng::stream(cfg.seed, r as u64))?
            .threshold(cfg.threshold);
        all_params
            .iter()
            .map(|params| {
                let maps = SetDistanceMaps::compute(&noisy, cfg.backend, params, rng::derive_seed(cfg.seed, r as u64));
                let field = match_with_maps(&maps, &template)?;
                let report = analyze_minima(&field)?;
                Ok(Run {
                    nom: report.nom,
                    cb_percent: report.cb_percent(),
                    found: report.global_min == scene.origin,
                })
            })
            .collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let k = cfg.rhos.len();
    let mut table = CurveTable::new("rho", cfg.rhos.clone(), vec![cfg.repetitions; k])?;
    let column = |f: &dyn Fn(&Run) -> f64| -> Vec<super::MeanSd> {
        (0..k)
            .map(|i| super::MeanSd::of(&runs.iter().map(|rep| f(&rep[i])).collect::<Vec<_>>()))
            .collect()
    };
    let nom = column(&|r| r.nom as f64);
    let cb = column(&|r| r.cb_percent);
    let found = column(&|r| if r.found { 1.0 } else { 0.0 });
    table.push_series("nom_mean", nom.iter().map(|s| s.mean).collect())?;
    table.push_series("nom_sd", nom.iter().map(|s| s.sd).collect())?;
    table.push_series("cb_percent_mean", cb.iter().map(|s| s.mean).collect())?;
    table.push_series("cb_percent_sd", cb.iter().map(|s| s.sd).collect())?;
    table.push_series("found_fraction", found.iter().map(|s| s.mean).collect())?;
    Ok(table)
}
