//! The square-root transform `T(x) = [m_x, m_y, s11, s12, s22]` where the
//! `s` entries form the principal square root of the shape matrix.
//!
//! In this space the squared Euclidean distance between two ellipses
//! approximates their Gaussian Wasserstein distance, so the conditional mean
//! of `T(X)` mapped back through `T⁻¹` is an approximate minimum-mean-GW
//! estimate.

use serde::{Deserialize, Serialize};

use crate::ellipse::{shape_matrix, sqrt_spd, EllipseState, ShapeMatrix};
use crate::error::{Error, Result};
use crate::gaussian::{Matrix5, Vector5};

/// A point in square-root space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformedState {
    pub m_x: f64,
    pub m_y: f64,
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
}

impl TransformedState {
    pub const fn new(m_x: f64, m_y: f64, s11: f64, s12: f64, s22: f64) -> Self {
        Self { m_x, m_y, s11, s12, s22 }
    }

    pub fn from_parts(center: [f64; 2], sqrt_shape: &ShapeMatrix) -> Self {
        Self::new(center[0], center[1], sqrt_shape.x11, sqrt_shape.x12, sqrt_shape.x22)
    }

    pub fn to_vector(&self) -> Vector5 {
        Vector5::new(self.m_x, self.m_y, self.s11, self.s12, self.s22)
    }

    pub fn from_vector(v: &Vector5) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4])
    }

    pub fn center(&self) -> [f64; 2] {
        [self.m_x, self.m_y]
    }

    /// The implied square root `[[s11, s12], [s12, s22]]`.
    pub fn sqrt_shape(&self) -> ShapeMatrix {
        ShapeMatrix::new(self.s11, self.s12, self.s22)
    }

    /// The implied shape matrix `S·S`.
    pub fn shape(&self) -> ShapeMatrix {
        self.sqrt_shape().square()
    }
}

pub fn transform(state: &EllipseState) -> Result<TransformedState> {
    let root = sqrt_spd(&shape_matrix(state)?)?;
    Ok(TransformedState::from_parts(state.center(), &root))
}

/// Canonical ellipse whose transform is `y`.
///
/// The semi-axes are the eigenvalues of the implied square root (equivalently
/// the square roots of the eigenvalues of `S·S`), the orientation is that of
/// the major eigenvector in `[0, π)`, and circles get orientation zero.
pub fn inverse_transform(y: &TransformedState) -> Result<EllipseState> {
    if !y.to_vector().iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite transformed state {y:?}")));
    }
    let root = y.sqrt_shape();
    root.check_psd()?;
    let (major, minor) = root.eigenvalues();
    let alpha = if root.is_isotropic() { 0.0 } else { root.major_axis_angle() };
    Ok(EllipseState::new(y.m_x, y.m_y, alpha, major.max(0.0), minor.max(0.0)))
}

/// Minimum semi-axis length and axis gap for which [`jacobian`] is defined.
pub const JACOBIAN_EPS: f64 = 1e-12;

/// Analytic Jacobian `∂T/∂x` at `state`.
///
/// Identity on the center block; the lower-right 3×3 block holds the
/// partials of `(s11, s12, s22)` with respect to `(alpha, l, w)`.
pub fn jacobian(state: &EllipseState) -> Result<Matrix5> {
    state.check_finite()?;
    let (l, w) = (state.l, state.w);
    if l.abs().min(w.abs()) < JACOBIAN_EPS {
        return Err(Error::Singular(format!("degenerate semi-axis in {state:?}")));
    }
    if (l.abs() - w.abs()).abs() < JACOBIAN_EPS {
        return Err(Error::Singular(format!("circular shape, orientation unidentifiable in {state:?}")));
    }

    let (sin, cos) = state.alpha.sin_cos();
    let (sin2, cos2) = (2.0 * state.alpha).sin_cos();
    let (l2, w2) = (l * l, w * w);

    let t11 = l2 * cos * cos + w2 * sin * sin;
    let t12 = (l2 - w2) * cos * sin;
    let t22 = l2 * sin * sin + w2 * cos * cos;
    let root_det = (t11 * t22 - t12 * t12).max(0.0).sqrt();
    let delta = root_det;
    let tau = (t11 + t22 + 2.0 * delta).sqrt();

    // partials of the shape-matrix entries, columns ordered (alpha, l, w)
    let d_t11 = [(w2 - l2) * sin2, 2.0 * l * cos * cos, 2.0 * w * sin * sin];
    let d_t12 = [(l2 - w2) * cos2, 2.0 * l * cos * sin, -2.0 * w * sin * cos];
    let d_t22 = [(l2 - w2) * sin2, 2.0 * l * sin * sin, 2.0 * w * cos * cos];

    let mut h = Matrix5::zeros();
    h[(0, 0)] = 1.0;
    h[(1, 1)] = 1.0;
    for u in 0..3 {
        let d_delta = (d_t11[u] * t22 + t11 * d_t22[u] - 2.0 * d_t12[u] * t12) / (2.0 * root_det);
        let d_tau = (d_t11[u] + d_t22[u] + 2.0 * d_delta) / (2.0 * tau);
        let quotient = |num: f64, d_num: f64| d_num / tau - d_tau * num / (tau * tau);
        h[(2, u + 2)] = quotient(t11 + delta, d_t11[u] + d_delta);
        h[(3, u + 2)] = quotient(t12, d_t12[u]);
        h[(4, u + 2)] = quotient(t22 + delta, d_t22[u] + d_delta);
    }
    Ok(h)
}
