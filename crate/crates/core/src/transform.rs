//! Backend selection: plain distance transform or one of the SDT evaluators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::edt::saturated_edt;
use crate::error::{Error, Result};
use crate::image::{BinaryImage, DistanceMap};
use crate::sdt::{det_sdt, det_sdt_masked, mc_sdt, mc_sdt_masked, SdtParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// `min[edt, d_max]`; ignores `rho`.
    Dt,
    McSdt,
    DetSdt,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Dt, Backend::McSdt, Backend::DetSdt];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Dt => "dt",
            Backend::McSdt => "mc-sdt",
            Backend::DetSdt => "det-sdt",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dt" => Ok(Backend::Dt),
            "mc-sdt" | "mc" => Ok(Backend::McSdt),
            "det-sdt" | "det" => Ok(Backend::DetSdt),
            other => Err(Error::InvalidParameter(format!("unknown backend {other:?}"))),
        }
    }
}

/// Distance map of `img`'s foreground under `backend`. `seed` only matters for
/// [`Backend::McSdt`].
pub fn transform(img: &BinaryImage, backend: Backend, params: &SdtParams, seed: u64) -> DistanceMap {
    match backend {
        Backend::Dt => saturated_edt(img, params.d_max()),
        Backend::McSdt => mc_sdt(img, params, seed),
        Backend::DetSdt => det_sdt(img, params),
    }
}

/// Like [`transform`] but only evaluated where `eval` is set (0 elsewhere).
pub fn transform_at(
    img: &BinaryImage,
    eval: &[bool],
    backend: Backend,
    params: &SdtParams,
    seed: u64,
) -> Result<DistanceMap> {
    if eval.len() != img.len() {
        return Err(Error::DimensionMismatch {
            expected: img.dims(),
            found: (eval.len(), 1),
        });
    }
    Ok(match backend {
        Backend::Dt => {
            let full = saturated_edt(img, params.d_max());
            let (w, h) = full.dims();
            let values = full
                .into_values()
                .into_iter()
                .zip(eval)
                .map(|(v, &e)| if e { v } else { 0.0 })
                .collect();
            DistanceMap::from_raw(w, h, values)
        }
        Backend::McSdt => mc_sdt_masked(img, params, seed, eval),
        Backend::DetSdt => det_sdt_masked(img, params, Some(eval)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_names_round_trip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert!("chamfer".parse::<Backend>().is_err());
    }
}
