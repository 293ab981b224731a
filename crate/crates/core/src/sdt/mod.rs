//! The stochastic distance transform.
//!
//! For a foreground set `X`, uncertainty factor `rho` and saturation distance
//! `d_max`, the transform at pixel `x` is the expected value of
//! `min[d(x, Y), d_max]` where `Y` keeps every point of `X` independently with
//! probability `1 - rho`. Three evaluators are provided:
//!
//! * [`mc_sdt`] averages over sampled realizations of `Y`,
//! * [`det_sdt`] sums the geometric series over the `k` nearest points,
//! * [`exact_sdt_oracle`] enumerates every subset (small sets only).

mod deterministic;
mod monte_carlo;
mod oracle;

pub use deterministic::det_sdt;
pub(crate) use deterministic::det_sdt_masked;
pub use monte_carlo::mc_sdt;
pub(crate) use monte_carlo::mc_sdt_masked;
pub use oracle::{exact_sdt_oracle, ORACLE_MAX_POINTS};

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::BinaryImage;

pub const DEFAULT_REALIZATIONS: usize = 400;
pub const DEFAULT_MASS: f64 = 0.999;

/// `ceil(sqrt(width^2 + height^2))`: the domain diameter.
pub fn default_d_max(width: usize, height: usize) -> f64 {
    ((width * width + height * height) as f64).sqrt().ceil()
}

/// Parameters shared by the SDT evaluators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SdtParams {
    rho: f64,
    d_max: f64,
    n_realizations: usize,
    mass: f64,
    k_override: Option<usize>,
}

impl SdtParams {
    pub fn new(rho: f64, d_max: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("rho must lie in [0, 1], got {rho}")));
        }
        if !(d_max > 0.0) || d_max.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "d_max must be positive and finite, got {d_max}"
            )));
        }
        Ok(Self {
            rho,
            d_max,
            n_realizations: DEFAULT_REALIZATIONS,
            mass: DEFAULT_MASS,
            k_override: None,
        })
    }

    /// `d_max` defaults to the domain diameter.
    pub fn for_domain(rho: f64, width: usize, height: usize) -> Result<Self> {
        Self::new(rho, default_d_max(width, height))
    }

    pub fn with_realizations(mut self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("at least one realization is required".into()));
        }
        self.n_realizations = n;
        Ok(self)
    }

    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass < 1.0) {
            return Err(Error::InvalidParameter(format!("mass must lie in (0, 1), got {mass}")));
        }
        self.mass = mass;
        Ok(self)
    }

    pub fn with_k(mut self, k: Option<usize>) -> Result<Self> {
        if k == Some(0) {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        self.k_override = k;
        Ok(self)
    }

    pub fn with_rho(self, rho: f64) -> Result<Self> {
        Self::new(rho, self.d_max)?
            .with_realizations(self.n_realizations)?
            .with_mass(self.mass)?
            .with_k(self.k_override)
    }

    pub fn with_d_max(self, d_max: f64) -> Result<Self> {
        Self::new(self.rho, d_max)?
            .with_realizations(self.n_realizations)?
            .with_mass(self.mass)?
            .with_k(self.k_override)
    }

    #[inline]
    pub fn rho(&self) -> f64 {
        self.rho
    }

    #[inline]
    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    #[inline]
    pub fn n_realizations(&self) -> usize {
        self.n_realizations
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }

    #[inline]
    pub fn k_override(&self) -> Option<usize> {
        self.k_override
    }

    /// Coverage probability `1 - rho` of the random-set model.
    #[inline]
    pub fn coverage(&self) -> f64 {
        1.0 - self.rho
    }

    /// Number of nearest points summed by the deterministic evaluator: 1 at
    /// `rho = 0`, 0 at `rho = 1`, otherwise the override or `kappa(rho, mass)`.
    pub fn nearest_count(&self) -> usize {
        if self.rho == 0.0 {
            1
        } else if self.rho == 1.0 {
            0
        } else {
            self.k_override
                .unwrap_or_else(|| kappa(self.rho, self.mass).expect("validated parameters"))
        }
    }

    /// Applies the keys of a parameter file on top of these parameters.
    pub fn apply(self, overrides: &ParamOverrides) -> Result<Self> {
        let mut p = self;
        if let Some(d) = overrides.dmax {
            p = p.with_d_max(d)?;
        }
        if let Some(r) = overrides.rho {
            p = p.with_rho(r)?;
        }
        if let Some(n) = overrides.n {
            p = p.with_realizations(n)?;
        }
        if let Some(m) = overrides.mass {
            p = p.with_mass(m)?;
        }
        if overrides.k.is_some() {
            p = p.with_k(overrides.k)?;
        }
        Ok(p)
    }
}

/// Optional parameter values, as read from a key-value file:
///
/// ```text
/// rho = 0.75
/// dmax = 256
/// n = 400
/// mass = 0.999
/// k = 25
/// ```
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub rho: Option<f64>,
    pub dmax: Option<f64>,
    pub n: Option<usize>,
    pub mass: Option<f64>,
    pub k: Option<usize>,
}

impl ParamOverrides {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter(e.message().to_string()))
    }
}

/// Minimal number of nearest points whose geometric weights cover probability
/// mass `mass`: `ceil(log(1 - mass) / log(rho))`, at least 1.
pub fn kappa(rho: f64, mass: f64) -> Result<usize> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!("kappa needs rho in (0, 1), got {rho}")));
    }
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::InvalidParameter(format!("kappa needs mass in (0, 1), got {mass}")));
    }
    let ratio = (1.0 - mass).ln() / rho.ln();
    // Exact integer ratios can land a few ulps above the integer.
    let k = (ratio - 1e-9).ceil();
    Ok((k as usize).max(1))
}

/// The i.i.d. random set `R(X, c)`: each point of `X` is kept with probability `c`.
#[derive(Clone, Copy, Debug)]
pub struct RandomSetModel<'a> {
    reference: &'a BinaryImage,
    coverage: f64,
}

impl<'a> RandomSetModel<'a> {
    pub fn new(reference: &'a BinaryImage, coverage: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&coverage) {
            return Err(Error::InvalidParameter(format!(
                "coverage must lie in [0, 1], got {coverage}"
            )));
        }
        Ok(Self {
            reference,
            coverage,
        })
    }

    pub fn from_params(reference: &'a BinaryImage, params: &SdtParams) -> Self {
        Self {
            reference,
            coverage: params.coverage(),
        }
    }

    pub fn reference(&self) -> &BinaryImage {
        self.reference
    }

    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    /// Draws one realization: one Bernoulli trial per reference point, in
    /// row-major order.
    pub fn sample_realization<R: Rng + ?Sized>(&self, rng: &mut R) -> BinaryImage {
        let mut out = BinaryImage::new(self.reference.width(), self.reference.height());
        self.sample_into(rng, out.mask_mut());
        out
    }

    pub(crate) fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [bool]) {
        let trial = Bernoulli::new(self.coverage).expect("coverage validated");
        for (o, &member) in out.iter_mut().zip(self.reference.mask()) {
            *o = member && trial.sample(rng);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(0.5, 0.95).unwrap(), 5);
        assert_eq!(kappa(0.9, 0.999).unwrap(), 66);
        assert_eq!(kappa(0.99, 0.99).unwrap(), 459);
        assert_eq!(kappa(0.75, 0.999).unwrap(), 25);
        assert_eq!(kappa(0.001, 0.5).unwrap(), 1);
    }

    #[test]
    fn kappa_rejects_degenerate_rho() {
        assert!(kappa(0.0, 0.9).is_err());
        assert!(kappa(1.0, 0.9).is_err());
        assert!(kappa(0.5, 1.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(SdtParams::new(-0.1, 10.0).is_err());
        assert!(SdtParams::new(1.1, 10.0).is_err());
        assert!(SdtParams::new(0.5, 0.0).is_err());
        let p = SdtParams::new(0.5, 10.0).unwrap();
        assert_eq!(p.n_realizations(), 400);
        assert_eq!(p.mass(), 0.999);
        assert!(p.with_realizations(0).is_err());
        assert!(p.with_mass(1.0).is_err());
        assert!(p.with_k(Some(0)).is_err());
    }

    #[test]
    fn nearest_count_endpoints() {
        assert_eq!(SdtParams::new(0.0, 5.0).unwrap().nearest_count(), 1);
        assert_eq!(SdtParams::new(1.0, 5.0).unwrap().nearest_count(), 0);
        let p = SdtParams::new(0.5, 5.0).unwrap().with_k(Some(3)).unwrap();
        assert_eq!(p.nearest_count(), 3);
    }

    #[test]
    fn default_d_max_is_ceiled_diagonal() {
        assert_eq!(default_d_max(3, 4), 5.0);
        assert_eq!(default_d_max(64, 64), 91.0);
    }

    #[test]
    fn overrides_parse_and_apply() {
        let o = ParamOverrides::parse("rho = 0.25\ndmax = 30\n# comment\nk = 4\n").unwrap();
        let p = SdtParams::new(0.5, 10.0).unwrap().apply(&o).unwrap();
        assert_eq!(p.rho(), 0.25);
        assert_eq!(p.d_max(), 30.0);
        assert_eq!(p.k_override(), Some(4));
        assert!(ParamOverrides::parse("sigma = 1").is_err());
        let bad = ParamOverrides::parse("rho = 2").unwrap();
        assert!(SdtParams::new(0.5, 10.0).unwrap().apply(&bad).is_err());
    }

    #[test]
    fn realization_endpoints() {
        let img = BinaryImage::from_points(8, 8, [(1, 1), (3, 5), (7, 7)]).unwrap();
        let mut r = rng::stream(1, 0);
        let all = RandomSetModel::new(&img, 1.0).unwrap().sample_realization(&mut r);
        assert_eq!(all, img);
        let none = RandomSetModel::new(&img, 0.0).unwrap().sample_realization(&mut r);
        assert_eq!(none.count(), 0);
    }

    #[test]
    fn realization_is_subset() {
        let img = BinaryImage::from_points(6, 6, (0..6).map(|i| (i, 5 - i))).unwrap();
        let model = RandomSetModel::new(&img, 0.5).unwrap();
        for s in 0..20 {
            let r = model.sample_realization(&mut rng::stream(s, 0));
            assert!(r.points().all(|(x, y)| img.get(x, y)));
        }
    }
}
