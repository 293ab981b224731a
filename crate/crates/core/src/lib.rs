//! Stochastic distance transforms for binary images.
//!
//! A binary image's foreground is treated as a discrete random set in which each
//! point survives independently with probability `1 - rho`. The stochastic
//! distance transform (SDT) is the expected saturated distance to that random
//! set. Isolated noise points rarely survive, so the SDT is far less sensitive
//! to them than the ordinary distance transform.
//!
//! Modules:
//!
//! * [`image`], [`io`], [`synth`]: containers, PGM/PNG and CSV I/O, synthetic
//!   scenes and noise models.
//! * [`edt`]: exact Euclidean distance transform and k-nearest distance maps.
//! * [`sdt`]: Monte Carlo and deterministic SDT, the `kappa` rule and an exact
//!   enumeration oracle.
//! * [`matching`]: sum-of-minimal-distances template matching and minima
//!   analysis of the resulting distance landscape.
//! * [`watershed`]: seeded watershed segmentation on internal distance maps.
//! * [`experiments`]: accuracy, template-matching and disk-separation studies.

pub mod edt;
pub mod error;
pub mod experiments;
pub mod image;
pub mod io;
pub mod matching;
mod par;
pub mod rng;
pub mod sdt;
pub mod synth;
pub mod transform;
pub mod watershed;

pub use edt::{edt, knn_distance_maps, saturated_edt, KnnDistanceMaps};
pub use error::{Error, Result};
pub use image::{BinaryImage, DistanceMap, GrayImage, LabelMap};
pub use sdt::{det_sdt, exact_sdt_oracle, kappa, mc_sdt, RandomSetModel, SdtParams};
pub use transform::{transform, Backend};
