//! Parameter-space fusion after aligning the parametrizations.
//!
//! The second estimate is rewritten in each of its four equivalent
//! parametrizations; the one most compatible with the first estimate is fused
//! with the ordinary Kalman combination.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::baseline::fuse_naive;
use super::{Diagnostics, FusionInput, FusionResult, Method};
use crate::ellipse::{equivalent_parametrizations, permute_covariance};
use crate::error::{Error, Result};
use crate::gaussian::{symmetrize, GaussianEstimate, Matrix5, Vector5};

/// Scores closer than this count as ties; the smaller `k` wins.
const TIE_TOL: f64 = 1e-12;
const RANK_TOL: f64 = 1e-12;

/// How the best parametrization `k` is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicCriterion {
    /// Minimize the Gaussian negative log likelihood of the innovation,
    /// `½(νᵀS⁻¹ν + log det S + 5 log 2π)`.
    #[default]
    Likelihood,
    /// Minimize `½(−νᵀSν + log det S⁻¹ − 5 log 2π)`, the uninverted and
    /// sign-flipped variant kept for sensitivity comparisons.
    Printed,
}

/// Scores of one candidate `k`.
#[derive(Debug, Clone, Copy)]
struct Score {
    /// Squared innovation outside the range of `S` (zero when `S` is regular).
    null_residual: f64,
    nll: f64,
    printed: f64,
}

fn score(nu: &Vector5, s: &Matrix5) -> Result<Score> {
    let eig = symmetrize(s).symmetric_eigen();
    let largest = eig.eigenvalues.max();
    let (mut quad, mut log_det, mut rank, mut null_residual) = (0.0, 0.0, 0usize, 0.0);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        let proj = eig.eigenvectors.column(i).dot(nu);
        if largest > 0.0 && lambda > RANK_TOL * largest {
            quad += proj * proj / lambda;
            log_det += lambda.ln();
            rank += 1;
        } else {
            null_residual += proj * proj;
        }
    }
    let log_2pi = TAU.ln();
    let nll = 0.5 * (quad + log_det + rank as f64 * log_2pi);
    let printed = 0.5 * (-(nu.transpose() * s * nu)[0] - log_det - 5.0 * log_2pi);
    if !(nll.is_finite() && printed.is_finite() && null_residual.is_finite()) {
        return Err(Error::Numerical("innovation likelihood is not finite".into()));
    }
    Ok(Score { null_residual, nll, printed })
}

/// A singular `S` is the `η → 0` limit of `S + ηI`: any innovation outside
/// its range dominates, so candidates are ranked by that residual first.
fn better(a: &Score, b: &Score, criterion: HeuristicCriterion) -> bool {
    match criterion {
        HeuristicCriterion::Likelihood => {
            let scale = 1.0 + a.null_residual.max(b.null_residual);
            if a.null_residual < b.null_residual - TIE_TOL * scale {
                true
            } else if a.null_residual > b.null_residual + TIE_TOL * scale {
                false
            } else {
                a.nll < b.nll - TIE_TOL
            }
        }
        HeuristicCriterion::Printed => a.printed < b.printed - TIE_TOL,
    }
}

pub fn fuse_heuristic(input: &FusionInput) -> Result<FusionResult> {
    fuse_heuristic_with(input, HeuristicCriterion::Likelihood)
}

pub fn fuse_heuristic_with(input: &FusionInput, criterion: HeuristicCriterion) -> Result<FusionResult> {
    input.validate()?;
    let (e1, e2) = (&input.est1, &input.est2);
    let variants = equivalent_parametrizations(&e2.mean)?;
    let candidates: Vec<GaussianEstimate> = variants
        .iter()
        .enumerate()
        .map(|(k, mean)| GaussianEstimate::new(*mean, permute_covariance(&e2.cov, k)))
        .collect();

    let scores = candidates
        .iter()
        .map(|c| score(&(e1.mean.to_vector() - c.mean.to_vector()), &(e1.cov + c.cov)))
        .collect::<Result<Vec<Score>>>()?;

    let mut k_opt = 0;
    for k in 1..4 {
        if better(&scores[k], &scores[k_opt], criterion) {
            k_opt = k;
        }
    }

    let mut result = fuse_naive(&FusionInput::new(*e1, candidates[k_opt]))?;
    result.method = Method::Heuristic;
    result.diagnostics = Diagnostics {
        k_opt: Some(k_opt),
        nll: Some([0, 1, 2, 3].map(|k| scores[k].nll)),
        printed_score: Some([0, 1, 2, 3].map(|k| scores[k].printed)),
        criterion: Some(criterion),
        ..result.diagnostics
    };
    Ok(result)
}
