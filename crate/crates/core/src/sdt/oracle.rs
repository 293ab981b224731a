use crate::error::{Error, Result};
use crate::image::{BinaryImage, DistanceMap};

/// Largest foreground accepted by [`exact_sdt_oracle`].
pub const ORACLE_MAX_POINTS: usize = 20;

/// Exact expectation of `min[d(x, Y), d_max]` over all `2^|X|` subsets `Y` of
/// the foreground, each weighted by `(1 - rho)^|Y| rho^(|X| - |Y|)`. The empty
/// subset contributes `d_max`.
///
/// Cost is `O(2^|X|)` per pixel; foregrounds above [`ORACLE_MAX_POINTS`] are rejected.
pub fn exact_sdt_oracle(img: &BinaryImage, rho: f64, d_max: f64) -> Result<DistanceMap> {
    let points: Vec<(usize, usize)> = img.points().collect();
    let n = points.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::TooManyPoints {
            count: n,
            max: ORACLE_MAX_POINTS,
        });
    }
    if !(0.0..=1.0).contains(&rho) || !(d_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "oracle needs rho in [0, 1] and d_max > 0, got rho={rho}, d_max={d_max}"
        )));
    }

    let subsets = 1usize << n;
    let weight_by_size: Vec<f64> = (0..=n)
        .map(|s| (1.0 - rho).powi(s as i32) * rho.powi((n - s) as i32))
        .collect();

    let mut min_dist = vec![0.0f64; subsets];
    let mut point_dist = vec![0.0f64; n];
    let mut values = Vec::with_capacity(img.len());
    for y in 0..img.height() {
        for x in 0..img.width() {
            for (d, &(px, py)) in point_dist.iter_mut().zip(&points) {
                let dx = px as f64 - x as f64;
                let dy = py as f64 - y as f64;
                *d = (dx * dx + dy * dy).sqrt().min(d_max);
            }
            min_dist[0] = d_max;
            let mut expectation = weight_by_size[0] * d_max;
            for mask in 1..subsets {
                let low = mask.trailing_zeros() as usize;
                let m = min_dist[mask & (mask - 1)].min(point_dist[low]);
                min_dist[mask] = m;
                expectation += weight_by_size[mask.count_ones() as usize] * m;
            }
            values.push(expectation);
        }
    }
    DistanceMap::from_values(img.width(), img.height(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_example() {
        // Points at distance 1 and 2 from the query pixel (0, 0).
        let img = BinaryImage::from_points(3, 3, [(1, 0), (2, 0)]).unwrap();
        let sdt = exact_sdt_oracle(&img, 0.5, 10.0).unwrap();
        assert!((sdt.get(0, 0) - 3.5).abs() < 1e-12);
    }

    #[test]
    fn endpoints() {
        let img = BinaryImage::from_points(5, 4, [(0, 0), (4, 3), (2, 1)]).unwrap();
        let exact = exact_sdt_oracle(&img, 0.0, 4.0).unwrap();
        let edt = crate::edt::saturated_edt(&img, 4.0);
        for (a, b) in exact.values().iter().zip(edt.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let all_gone = exact_sdt_oracle(&img, 1.0, 4.0).unwrap();
        assert!(all_gone.values().iter().all(|&v| v == 4.0));
    }

    #[test]
    fn rejects_large_sets() {
        let img = BinaryImage::full(5, 5);
        assert!(matches!(
            exact_sdt_oracle(&img, 0.5, 5.0),
            Err(Error::TooManyPoints { count: 25, .. })
        ));
    }
}
