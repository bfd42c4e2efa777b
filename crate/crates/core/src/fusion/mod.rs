//! Fusion of two independent Gaussian ellipse estimates.
//!
//! Five strategies share one interface ([`fuse`]):
//!
//! | method       | space          | uses covariances | parametrization invariant |
//! |--------------|----------------|------------------|---------------------------|
//! | `naive`      | parameters     | yes              | no                        |
//! | `shape_mean` | shape matrices | no               | yes                       |
//! | `mmgw_lin`   | square root    | yes, linearized  | yes                       |
//! | `mmgw_mc`    | square root    | yes, sampled     | yes                       |
//! | `heuristic`  | parameters     | yes              | yes                       |

mod baseline;
mod combine;
mod heuristic;
mod mmgw;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use baseline::{fuse_naive, fuse_shape_mean};
pub use combine::{kalman_combine, Combined};
pub use heuristic::{fuse_heuristic, fuse_heuristic_with, HeuristicCriterion};
pub use mmgw::{fuse_mmgw_lin, fuse_mmgw_mc, fuse_mmgw_mc_seeded, linearized_moments, sampled_moments};

use crate::ellipse::EllipseState;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianEstimate, TransformedGaussian};
use crate::rng::SampleSeeds;

/// Default particle count per estimate for MMGW-MC.
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Naive,
    ShapeMean,
    MmgwLin,
    MmgwMc,
    Heuristic,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Naive, Method::ShapeMean, Method::MmgwLin, Method::MmgwMc, Method::Heuristic];

    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::ShapeMean => "shape_mean",
            Method::MmgwLin => "mmgw_lin",
            Method::MmgwMc => "mmgw_mc",
            Method::Heuristic => "heuristic",
        }
    }

    /// Whether the result depends only on the ellipses, not on how they are
    /// parametrized.
    pub fn is_parametrization_invariant(self) -> bool {
        self != Method::Naive
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .or(match key.as_str() {
                "regular" => Some(Method::Naive),
                "mean" => Some(Method::ShapeMean),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidInput(format!("unknown fusion method `{s}`")))
    }
}

/// Two independent estimates of the same ellipse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionInput {
    pub est1: GaussianEstimate,
    pub est2: GaussianEstimate,
}

impl FusionInput {
    pub fn new(est1: GaussianEstimate, est2: GaussianEstimate) -> Self {
        Self { est1, est2 }
    }

    pub fn validate(&self) -> Result<()> {
        self.est1.validate()?;
        self.est2.validate()
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.est2, self.est1)
    }
}

/// Method-specific details of a fusion.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Heuristic: the chosen equivalent parametrization of the second estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_opt: Option<usize>,
    /// Heuristic: Gaussian negative log likelihood of each `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nll: Option<[f64; 4]>,
    /// Heuristic: the alternative selection score of each `k` (see [`HeuristicCriterion::Printed`]).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_score: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<HeuristicCriterion>,
    /// MMGW-MC: particles drawn per estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Directions in which the combined covariance vanished and the means were averaged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub null_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionResult {
    /// Canonical fused ellipse.
    pub fused: EllipseState,
    /// Fused mean and covariance in square-root space (MMGW methods only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fused_transformed: Option<TransformedGaussian>,
    pub method: Method,
    #[serde(default)]
    pub diagnostics: Diagnostics,
}

/// Parameters that only some methods use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionOptions {
    pub samples: usize,
    pub seeds: SampleSeeds,
    pub criterion: HeuristicCriterion,
}

impl Default for FusionOptions {
    fn default() -> Self {
        Self { samples: DEFAULT_SAMPLES, seeds: SampleSeeds::from_seed(0), criterion: HeuristicCriterion::default() }
    }
}

impl FusionOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { seeds: SampleSeeds::from_seed(seed), ..Self::default() }
    }
}

pub fn fuse(input: &FusionInput, method: Method, options: &FusionOptions) -> Result<FusionResult> {
    match method {
        Method::Naive => fuse_naive(input),
        Method::ShapeMean => fuse_shape_mean(input),
        Method::MmgwLin => fuse_mmgw_lin(input),
        Method::MmgwMc => fuse_mmgw_mc_seeded(input, options.samples, options.seeds),
        Method::Heuristic => fuse_heuristic_with(input, options.criterion),
    }
}
