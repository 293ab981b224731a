use crate::edt::{saturated_edt, sq_to_dist, squared_edt, squared_edt_mask, OffsetTable};
use crate::image::{BinaryImage, DistanceMap};
use crate::{par, rng};

use super::{RandomSetModel, SdtParams};

/// Realizations generated and reduced together.
const BATCH: usize = 32;

/// Monte Carlo SDT: the mean over `params.n_realizations()` sampled subsets of
/// `min[d(x, subset), d_max]`.
///
/// Realization `i` draws from [`rng::stream`]`(seed, i)`, and per-pixel sums are
/// accumulated in realization order, so the output is identical for any thread
/// count. Sums are plain `f64` additions divided by `N` at the end.
pub fn mc_sdt(img: &BinaryImage, params: &SdtParams, seed: u64) -> DistanceMap {
    let (width, height) = img.dims();
    let d_max = params.d_max();
    if params.rho() == 0.0 {
        return saturated_edt(img, d_max);
    }
    if params.rho() == 1.0 || img.count() == 0 {
        return DistanceMap::new(width, height, d_max);
    }

    let model = RandomSetModel::from_params(img, params);
    let n = params.n_realizations();
    let pixels = width * height;
    let mut sum = vec![0.0f64; pixels];
    for start in (0..n).step_by(BATCH) {
        let batch = BATCH.min(n - start);
        let realizations = par::map_indices(batch, |j| {
            let mut rng = rng::stream(seed, (start + j) as u64);
            let mut mask = vec![false; pixels];
            model.sample_into(&mut rng, &mut mask);
            squared_edt_mask(width, height, &mask)
        });
        for d2s in realizations {
            for (s, d2) in sum.iter_mut().zip(d2s) {
                *s += sq_to_dist(d2).min(d_max);
            }
        }
    }
    let values = sum.into_iter().map(|s| s / n as f64).collect();
    DistanceMap::from_raw(width, height, values)
}

/// [`mc_sdt`] evaluated only where `eval` is set; other pixels hold 0.
///
/// Realizations are drawn exactly as in [`mc_sdt`], but each evaluated pixel
/// finds its nearest retained point by walking the sorted offset table instead
/// of running a full transform per realization. Evaluated pixels are
/// bit-identical to the full evaluation.
pub(crate) fn mc_sdt_masked(
    reference: &BinaryImage,
    params: &SdtParams,
    seed: u64,
    eval: &[bool],
) -> DistanceMap {
    let (width, height) = reference.dims();
    let d_max = params.d_max();
    let keep = |v: f64, p: usize| if eval[p] { v } else { 0.0 };
    if params.rho() == 0.0 || params.rho() == 1.0 || reference.count() == 0 {
        let full = mc_sdt(reference, params, seed);
        let values = full
            .values()
            .iter()
            .enumerate()
            .map(|(p, &v)| keep(v, p))
            .collect();
        return DistanceMap::from_raw(width, height, values);
    }

    let model = RandomSetModel::from_params(reference, params);
    let table = OffsetTable::for_dims(width, height);
    let end = table.end_before(d_max);
    let nearest = squared_edt(reference);
    let targets: Vec<usize> = (0..eval.len()).filter(|&p| eval[p]).collect();
    let from: Vec<usize> = targets.iter().map(|&p| table.start(nearest[p])).collect();

    let n = params.n_realizations();
    let pixels = width * height;
    let mut sum = vec![0.0f64; targets.len()];
    let mut masks = vec![vec![false; pixels]; BATCH.min(n)];
    for start in (0..n).step_by(BATCH) {
        let batch = BATCH.min(n - start);
        for (j, mask) in masks.iter_mut().take(batch).enumerate() {
            let mut rng = rng::stream(seed, (start + j) as u64);
            model.sample_into(&mut rng, mask);
        }
        let masks = &masks[..batch];
        par::for_each_row(&mut sum, 1, |t, s| {
            let p = targets[t];
            let (x, y) = (p % width, p / width);
            for mask in masks {
                let d = table
                    .hits(x, y, from[t], end, |i| mask[i])
                    .next()
                    .map_or(d_max, |d2| (d2 as f64).sqrt().min(d_max));
                s[0] += d;
            }
        });
    }

    let mut values = vec![0.0; pixels];
    for (&p, s) in targets.iter().zip(sum) {
        values[p] = s / n as f64;
    }
    DistanceMap::from_raw(width, height, values)
}
