use crate::error::{Error, Result};
use crate::gaussian::{symmetrize, Matrix5, Vector5};

/// Eigenvalues of `P₁ + P₂` at or below this fraction of the largest one
/// are treated as zero.
const RANK_TOL: f64 = 1e-12;

/// Output of [`kalman_combine`].
#[derive(Debug, Clone, Copy)]
pub struct Combined {
    pub mean: Vector5,
    pub cov: Matrix5,
    /// Directions in which `P₁ + P₂` vanished and the means were averaged.
    pub null_dim: usize,
}

/// Track-to-track combination of two independent Gaussian estimates:
/// `P₂(P₁+P₂)⁻¹ y₁ + P₁(P₁+P₂)⁻¹ y₂` with covariance `P₁(P₁+P₂)⁻¹P₂`.
///
/// When `P₁ + P₂` is singular the inverse is replaced by the pseudo-inverse
/// and the two means are averaged on its null space. This is the limit of
/// adding `ηI` to both covariances as `η → 0`, and makes two exact (zero
/// covariance) estimates fuse to their midpoint.
pub fn kalman_combine(y1: &Vector5, p1: &Matrix5, y2: &Vector5, p2: &Matrix5) -> Result<Combined> {
    let sum = symmetrize(&(p1 + p2));
    if !sum.iter().all(|v| v.is_finite()) {
        return Err(Error::Numerical("combined covariance has non-finite entries".into()));
    }
    let eig = sum.symmetric_eigen();
    let largest = eig.eigenvalues.max();
    let tol = RANK_TOL * largest;

    let mut pinv = Matrix5::zeros();
    let mut null = Matrix5::zeros();
    let mut null_dim = 0;
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let outer = v * v.transpose();
        if largest > 0.0 && lambda > tol {
            pinv += outer / lambda;
        } else {
            null += outer;
            null_dim += 1;
        }
    }

    let w1 = p2 * pinv + null * 0.5;
    let w2 = p1 * pinv + null * 0.5;
    let mean = w1 * y1 + w2 * y2;
    let cov = symmetrize(&(p1 * pinv * p2));
    if !mean.iter().chain(cov.iter()).all(|v| v.is_finite()) {
        return Err(Error::Numerical("covariance combination produced non-finite values".into()));
    }
    Ok(Combined { mean, cov, null_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spd(seed: f64) -> Matrix5 {
        let a = Matrix5::from_fn(|i, j| ((i * 5 + j) as f64 * seed).sin());
        a * a.transpose() + Matrix5::identity() * 0.1
    }

    #[test]
    fn matches_direct_inverse_when_regular() {
        let (p1, p2) = (spd(0.7), spd(1.3));
        let y1 = Vector5::new(1.0, -2.0, 3.0, 0.5, 0.1);
        let y2 = Vector5::new(-1.0, 0.0, 2.0, 1.5, 0.4);
        let inv = (p1 + p2).try_inverse().unwrap();
        let expected = p2 * inv * y1 + p1 * inv * y2;
        let c = kalman_combine(&y1, &p1, &y2, &p2).unwrap();
        assert_abs_diff_eq!(c.mean, expected, epsilon = 1e-10);
        assert_abs_diff_eq!(c.cov, p1 * inv * p2, epsilon = 1e-10);
        assert_eq!(c.null_dim, 0);
    }

    #[test]
    fn zero_covariances_average() {
        let y1 = Vector5::repeat(1.0);
        let y2 = Vector5::repeat(3.0);
        let c = kalman_combine(&y1, &Matrix5::zeros(), &y2, &Matrix5::zeros()).unwrap();
        assert_abs_diff_eq!(c.mean, Vector5::repeat(2.0), epsilon = 1e-15);
        assert_eq!(c.cov, Matrix5::zeros());
        assert_eq!(c.null_dim, 5);
    }

    #[test]
    fn exact_estimate_wins() {
        let y1 = Vector5::repeat(1.0);
        let y2 = Vector5::repeat(3.0);
        let c = kalman_combine(&y1, &Matrix5::zeros(), &y2, &Matrix5::identity()).unwrap();
        assert_abs_diff_eq!(c.mean, y1, epsilon = 1e-15);
    }

    #[test]
    fn rejects_non_finite() {
        let mut p = Matrix5::identity();
        p[(0, 0)] = f64::INFINITY;
        assert!(kalman_combine(&Vector5::zeros(), &p, &Vector5::zeros(), &p).is_err());
    }
}
