//! MMGW fusion: move both estimates into square-root space, combine them
//! there with the Kalman formulas and map the fused mean back.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;

use super::combine::kalman_combine;
use super::{Diagnostics, FusionInput, FusionResult, Method};
use crate::ellipse::{permute_covariance, wrap};
use crate::error::{Error, Result};
use crate::gaussian::{symmetrize, GaussianEstimate, GaussianSampler, Matrix5, TransformedGaussian, Vector5};
use crate::rng::SampleSeeds;
use crate::transform::{inverse_transform, jacobian, transform, TransformedState};

/// First-order moments of `T(X)` for `X ~ N(x̂, C)`: the mean goes through
/// the exact transform, the covariance through the Jacobian, `H C Hᵀ`.
pub fn linearized_moments(est: &GaussianEstimate) -> Result<TransformedGaussian> {
    let h = jacobian(&est.mean)?;
    Ok(TransformedGaussian { mean: transform(&est.mean)?, cov: symmetrize(&(h * est.cov * h.transpose())) })
}

/// Moment-matched Gaussian of `m` transformed particles drawn from the estimate.
///
/// The scatter is normalized by `1/m`. Particles are drawn in a fixed
/// equivalent parametrization of the estimate (orientation in `[0, π/2)`),
/// so every parametrization of the same estimate yields the same particles
/// for the same random stream.
pub fn sampled_moments<R: Rng + ?Sized>(est: &GaussianEstimate, m: usize, rng: &mut R) -> Result<TransformedGaussian> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples per estimate, got {m}")));
    }
    let sampler = GaussianSampler::from_estimate(&sampling_frame(est));
    let particles = (0..m)
        .map(|_| {
            let draw = crate::ellipse::EllipseState::from_vector(&sampler.sample(rng));
            transform(&draw).map(|y| y.to_vector())
        })
        .collect::<Result<Vec<Vector5>>>()?;

    let mean = particles.iter().sum::<Vector5>() / m as f64;
    let scatter = particles.iter().fold(Matrix5::zeros(), |acc, p| {
        let d = p - mean;
        acc + d * d.transpose()
    });
    Ok(TransformedGaussian { mean: TransformedState::from_vector(&mean), cov: symmetrize(&(scatter / m as f64)) })
}

fn sampling_frame(est: &GaussianEstimate) -> GaussianEstimate {
    let quarter = (wrap(est.mean.alpha, TAU) / FRAC_PI_2).floor() as usize;
    let k = (4 - quarter.min(3)) % 4;
    GaussianEstimate::new(est.mean.equivalent(k), permute_covariance(&est.cov, k))
}

fn combine_transformed(
    t1: &TransformedGaussian,
    t2: &TransformedGaussian,
    method: Method,
    mut diagnostics: Diagnostics,
) -> Result<FusionResult> {
    let c = kalman_combine(&t1.mean.to_vector(), &t1.cov, &t2.mean.to_vector(), &t2.cov)?;
    let mean = TransformedState::from_vector(&c.mean);
    diagnostics.null_dim = Some(c.null_dim);
    Ok(FusionResult {
        fused: inverse_transform(&mean)?,
        fused_transformed: Some(TransformedGaussian { mean, cov: c.cov }),
        method,
        diagnostics,
    })
}

fn label(err: Error, which: &str) -> Error {
    match err {
        Error::Singular(msg) => Error::Singular(format!("{which}: {msg}")),
        other => other,
    }
}

/// MMGW fusion with linearized covariance propagation.
pub fn fuse_mmgw_lin(input: &FusionInput) -> Result<FusionResult> {
    input.validate()?;
    let t1 = linearized_moments(&input.est1).map_err(|e| label(e, "estimate 1"))?;
    let t2 = linearized_moments(&input.est2).map_err(|e| label(e, "estimate 2"))?;
    combine_transformed(&t1, &t2, Method::MmgwLin, Diagnostics::default())
}

/// MMGW fusion with `m` particles per estimate, seeds derived from `seed`.
pub fn fuse_mmgw_mc(input: &FusionInput, m: usize, seed: u64) -> Result<FusionResult> {
    fuse_mmgw_mc_seeded(input, m, SampleSeeds::from_seed(seed))
}

/// MMGW fusion with `m` particles per estimate and one seed per estimate.
pub fn fuse_mmgw_mc_seeded(input: &FusionInput, m: usize, seeds: SampleSeeds) -> Result<FusionResult> {
    input.validate()?;
    let t1 = sampled_moments(&input.est1, m, &mut seeds.rng(0))?;
    let t2 = sampled_moments(&input.est2, m, &mut seeds.rng(1))?;
    let diagnostics = Diagnostics { samples: Some(m), ..Diagnostics::default() };
    combine_transformed(&t1, &t2, Method::MmgwMc, diagnostics)
}
