use super::combine::kalman_combine;
use super::{Diagnostics, FusionInput, FusionResult, Method};
use crate::ellipse::{shape_matrix, EllipseState};
use crate::error::Result;

/// Kalman combination of the raw parameter vectors `[m_x, m_y, alpha, l, w]`.
///
/// The orientation is fused as an ordinary real without wrapping. Two
/// parametrizations of one ellipse therefore fuse to a different ellipse.
pub fn fuse_naive(input: &FusionInput) -> Result<FusionResult> {
    input.validate()?;
    let (e1, e2) = (&input.est1, &input.est2);
    let c = kalman_combine(&e1.mean.to_vector(), &e1.cov, &e2.mean.to_vector(), &e2.cov)?;
    Ok(FusionResult {
        fused: EllipseState::from_vector(&c.mean).canonical(),
        fused_transformed: None,
        method: Method::Naive,
        diagnostics: Diagnostics { null_dim: Some(c.null_dim), ..Diagnostics::default() },
    })
}

/// Averages centers and shape matrices with equal weights, ignoring covariances.
pub fn fuse_shape_mean(input: &FusionInput) -> Result<FusionResult> {
    input.validate()?;
    let (a, b) = (&input.est1.mean, &input.est2.mean);
    let shape = shape_matrix(a)?.add(&shape_matrix(b)?).scale(0.5);
    let center = [0.5 * (a.m_x + b.m_x), 0.5 * (a.m_y + b.m_y)];
    Ok(FusionResult {
        fused: EllipseState::from_shape(center, &shape)?,
        fused_transformed: None,
        method: Method::ShapeMean,
        diagnostics: Diagnostics::default(),
    })
}
