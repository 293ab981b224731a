use crate::edt::{saturated_edt, squared_edt, OffsetTable};
use crate::image::{BinaryImage, DistanceMap};
use crate::par;

use super::SdtParams;

/// Closed-form SDT over the `k` nearest foreground points:
///
/// `rho^k d_max + sum_{i=1..k} rho^(i-1) (1 - rho) min[d_(i)(x), d_max]`
///
/// with `k = params.nearest_count()`. When `k` exceeds the number of points,
/// the missing layers are saturated distances and fold into the head term, so
/// the sum stops at the last existing point.
pub fn det_sdt(img: &BinaryImage, params: &SdtParams) -> DistanceMap {
    det_sdt_masked(img, params, None)
}

/// [`det_sdt`] evaluated only where `eval` is set; other pixels hold 0.
pub(crate) fn det_sdt_masked(
    reference: &BinaryImage,
    params: &SdtParams,
    eval: Option<&[bool]>,
) -> DistanceMap {
    let (width, height) = reference.dims();
    let d_max = params.d_max();
    let rho = params.rho();
    let keep = |p: usize| eval.is_none_or(|m| m[p]);

    if rho == 0.0 {
        let full = saturated_edt(reference, d_max);
        return match eval {
            None => full,
            Some(_) => mask_values(full, keep),
        };
    }
    if rho == 1.0 {
        return mask_values(DistanceMap::new(width, height, d_max), keep);
    }

    let k = params.nearest_count().min(reference.count());
    let table = OffsetTable::for_dims(width, height);
    let end = table.end_before(d_max);
    let nearest = squared_edt(reference);
    let mask = reference.mask();
    let coverage = 1.0 - rho;

    let mut values = vec![0.0; width * height];
    par::for_each_row(&mut values, width, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let p = y * width + x;
            if !keep(p) {
                continue;
            }
            let mut sum = 0.0;
            // rho^(number of terms so far)
            let mut tail = 1.0;
            let from = table.start(nearest[p]);
            for d2 in table.hits(x, y, from, end, |i| mask[i]).take(k) {
                sum += tail * coverage * (d2 as f64).sqrt();
                tail *= rho;
            }
            *out = sum + tail * d_max;
        }
    });
    DistanceMap::from_raw(width, height, values)
}

fn mask_values(map: DistanceMap, keep: impl Fn(usize) -> bool) -> DistanceMap {
    let (w, h) = map.dims();
    let values = map
        .into_values()
        .into_iter()
        .enumerate()
        .map(|(p, v)| if keep(p) { v } else { 0.0 })
        .collect();
    DistanceMap::from_raw(w, h, values)
}
