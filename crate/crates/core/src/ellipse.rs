//! Ellipse parameters and the 2×2 shape-matrix algebra behind them.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{Matrix5, Vector5};
use crate::PSD_EPS;

/// An ellipse given by center, orientation and semi-axes.
///
/// Any real `l`, `w` and `alpha` is accepted; the ellipse only depends on
/// `l²`, `w²` and the orientation, so many parameter vectors describe the
/// same ellipse. [`EllipseState::canonical`] picks one representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseState {
    pub m_x: f64,
    pub m_y: f64,
    /// Orientation of the `l` axis in radians.
    pub alpha: f64,
    pub l: f64,
    pub w: f64,
}

impl EllipseState {
    pub const fn new(m_x: f64, m_y: f64, alpha: f64, l: f64, w: f64) -> Self {
        Self { m_x, m_y, alpha, l, w }
    }

    /// Components in the order `[m_x, m_y, alpha, l, w]`.
    pub fn to_vector(&self) -> Vector5 {
        Vector5::new(self.m_x, self.m_y, self.alpha, self.l, self.w)
    }

    pub fn from_vector(v: &Vector5) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4])
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.m_x, self.m_y, self.alpha, self.l, self.w]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn center(&self) -> [f64; 2] {
        [self.m_x, self.m_y]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("non-finite ellipse state {self:?}")))
        }
    }

    /// The representative with `alpha ∈ [0, π)` and `l ≥ w ≥ 0`.
    ///
    /// This is a pure reparametrization: the shape matrix is unchanged. A
    /// circle keeps its orientation here; only reconstruction from a shape
    /// matrix forces `alpha = 0` for circles.
    pub fn canonical(&self) -> Self {
        let (mut l, mut w, mut alpha) = (self.l.abs(), self.w.abs(), self.alpha);
        if l < w {
            std::mem::swap(&mut l, &mut w);
            alpha += FRAC_PI_2;
        }
        Self::new(self.m_x, self.m_y, wrap(alpha, PI), l, w)
    }

    /// `true` when the state already is its own canonical representative.
    pub fn is_canonical(&self) -> bool {
        self.l >= self.w && self.w >= 0.0 && (0.0..PI).contains(&self.alpha)
    }

    /// The `k`-th equivalent parametrization: orientation advanced by
    /// `k·π/2` and reduced modulo `2π`, axes swapped for odd `k`.
    pub fn equivalent(&self, k: usize) -> Self {
        let alpha = wrap(self.alpha + (k % 4) as f64 * FRAC_PI_2, TAU);
        let (l, w) = if k.is_multiple_of(2) { (self.l, self.w) } else { (self.w, self.l) };
        Self::new(self.m_x, self.m_y, alpha, l, w)
    }

    /// Reconstructs the canonical state from a center and a shape matrix.
    ///
    /// Eigenvalues in `[-ε, 0)` are clamped to zero. Circles get `alpha = 0`.
    pub fn from_shape(center: [f64; 2], shape: &ShapeMatrix) -> Result<Self> {
        shape.check_psd()?;
        let (major, minor) = shape.eigenvalues();
        let alpha = if shape.is_isotropic() { 0.0 } else { shape.major_axis_angle() };
        Ok(Self::new(center[0], center[1], alpha, major.max(0.0).sqrt(), minor.max(0.0).sqrt()))
    }
}

/// Reduces `x` into `[0, period)`.
pub(crate) fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    // rem_euclid can round up to `period` for tiny negative inputs
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Symmetric 2×2 matrix stored by its upper triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeMatrix {
    pub x11: f64,
    pub x12: f64,
    pub x22: f64,
}

impl ShapeMatrix {
    pub const fn new(x11: f64, x12: f64, x22: f64) -> Self {
        Self { x11, x12, x22 }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 1.0)
    }

    /// Takes the upper triangle and the mean of the two off-diagonal entries.
    pub fn from_matrix(m: &Matrix2<f64>) -> Self {
        Self::new(m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)])
    }

    pub fn to_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.x11, self.x12, self.x12, self.x22)
    }

    pub fn trace(&self) -> f64 {
        self.x11 + self.x22
    }

    pub fn det(&self) -> f64 {
        self.x11.mul_add(self.x22, -self.x12 * self.x12)
    }

    pub fn is_finite(&self) -> bool {
        self.x11.is_finite() && self.x12.is_finite() && self.x22.is_finite()
    }

    /// Half the gap between the two eigenvalues.
    fn half_spread(&self) -> f64 {
        (0.5 * (self.x11 - self.x22)).hypot(self.x12)
    }

    /// Eigenvalues `(larger, smaller)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mid = 0.5 * self.trace();
        let spread = self.half_spread();
        let major = mid + spread;
        // det / major avoids cancellation for nearly rank-one matrices
        let minor = if major > 0.0 && mid > 0.0 { self.det() / major } else { mid - spread };
        (major, minor)
    }

    /// Orientation in `[0, π)` of the eigenvector of the larger eigenvalue.
    pub fn major_axis_angle(&self) -> f64 {
        wrap(0.5 * (2.0 * self.x12).atan2(self.x11 - self.x22), PI)
    }

    /// Both eigenvalues coincide to working precision.
    pub fn is_isotropic(&self) -> bool {
        self.half_spread() <= PSD_EPS * self.trace().abs().max(1.0)
    }

    /// Tolerance for the smallest eigenvalue, scaled with the matrix size.
    fn psd_tolerance(&self) -> f64 {
        PSD_EPS * self.trace().abs().max(1.0)
    }

    pub fn is_psd(&self) -> bool {
        self.is_finite() && self.eigenvalues().1 >= -self.psd_tolerance()
    }

    pub(crate) fn check_psd(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite matrix {self:?}")));
        }
        let (_, minor) = self.eigenvalues();
        if minor < -self.psd_tolerance() {
            return Err(Error::Domain(format!("matrix {self:?} is indefinite (smallest eigenvalue {minor:e})")));
        }
        Ok(())
    }

    /// `self · self`.
    pub fn square(&self) -> Self {
        let off = self.x12 * (self.x11 + self.x22);
        Self::new(self.x11.mul_add(self.x11, self.x12 * self.x12), off, self.x22.mul_add(self.x22, self.x12 * self.x12))
    }

    /// `self · inner · self`, symmetrized.
    pub fn congruence(&self, inner: &ShapeMatrix) -> Self {
        let s = self.to_matrix();
        Self::from_matrix(&(s * inner.to_matrix() * s))
    }

    pub fn add(&self, other: &ShapeMatrix) -> Self {
        Self::new(self.x11 + other.x11, self.x12 + other.x12, self.x22 + other.x22)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.x11 * factor, self.x12 * factor, self.x22 * factor)
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &ShapeMatrix) -> f64 {
        (self.x11 - other.x11).abs().max((self.x12 - other.x12).abs()).max((self.x22 - other.x22).abs())
    }
}

/// `R_α · diag(l², w²) · R_αᵀ`.
pub fn shape_matrix(state: &EllipseState) -> Result<ShapeMatrix> {
    state.check_finite()?;
    let (sin, cos) = state.alpha.sin_cos();
    let (l2, w2) = (state.l * state.l, state.w * state.w);
    Ok(ShapeMatrix::new(l2 * cos * cos + w2 * sin * sin, (l2 - w2) * cos * sin, l2 * sin * sin + w2 * cos * cos))
}

/// Principal square root of a symmetric PSD 2×2 matrix.
///
/// Closed form `S = (X + δI) / τ` with `δ = √det X` and `τ = √(tr X + 2δ)`.
pub fn sqrt_spd(x: &ShapeMatrix) -> Result<ShapeMatrix> {
    x.check_psd()?;
    let delta = x.det().max(0.0).sqrt();
    let tau = (x.trace() + 2.0 * delta).max(0.0).sqrt();
    if tau == 0.0 {
        return Ok(ShapeMatrix::new(0.0, 0.0, 0.0));
    }
    Ok(ShapeMatrix::new((x.x11 + delta) / tau, x.x12 / tau, (x.x22 + delta) / tau))
}

/// The four parametrizations `k = 0..4` of the same ellipse.
pub fn equivalent_parametrizations(state: &EllipseState) -> Result<[EllipseState; 4]> {
    state.check_finite()?;
    Ok([0, 1, 2, 3].map(|k| state.equivalent(k)))
}

/// Covariance of the `k`-th equivalent parametrization: for odd `k` the
/// `l` and `w` rows and columns trade places.
pub fn permute_covariance(cov: &Matrix5, k: usize) -> Matrix5 {
    let mut out = *cov;
    if k % 2 == 1 {
        out.swap_rows(3, 4);
        out.swap_columns(3, 4);
    }
    out
}
