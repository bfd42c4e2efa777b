//! Gaussian estimates in parameter space and in square-root space.

use nalgebra::{SMatrix, SVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ellipse::EllipseState;
use crate::error::{Error, Result};
use crate::transform::TransformedState;
use crate::PSD_EPS;

pub type Matrix5 = SMatrix<f64, 5, 5>;
pub type Vector5 = SVector<f64, 5>;

/// One sensor's track output: ellipse parameters and their covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianEstimate {
    pub mean: EllipseState,
    #[serde(with = "cov_serde")]
    pub cov: Matrix5,
}

impl GaussianEstimate {
    pub fn new(mean: EllipseState, cov: Matrix5) -> Self {
        Self { mean, cov }
    }

    pub fn with_diagonal(mean: EllipseState, variances: [f64; 5]) -> Self {
        Self::new(mean, Matrix5::from_diagonal(&Vector5::from(variances)))
    }

    /// Checks finiteness, symmetry and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        self.mean.check_finite()?;
        check_covariance(&self.cov)
    }
}

/// Mean and covariance in square-root space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformedGaussian {
    pub mean: TransformedState,
    #[serde(with = "cov_serde")]
    pub cov: Matrix5,
}

/// Symmetric within `1e-9` relative and PSD within `ε`.
pub fn check_covariance(cov: &Matrix5) -> Result<()> {
    if !cov.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("covariance has non-finite entries".into()));
    }
    let scale = cov.amax().max(1.0);
    let asym = (cov - cov.transpose()).amax();
    if asym > 1e-9 * scale {
        return Err(Error::InvalidInput(format!("covariance is not symmetric (max asymmetry {asym:e})")));
    }
    let min_eig = symmetrize(cov).symmetric_eigenvalues().min();
    if min_eig < -PSD_EPS * scale {
        return Err(Error::InvalidInput(format!(
            "covariance is not positive semidefinite (smallest eigenvalue {min_eig:e})"
        )));
    }
    Ok(())
}

pub fn symmetrize(m: &Matrix5) -> Matrix5 {
    (m + m.transpose()) * 0.5
}

/// Draws from `N(mean, cov)` through a symmetric square-root factor, so
/// singular (including zero) covariances are fine.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    mean: Vector5,
    factor: Matrix5,
}

impl GaussianSampler {
    pub fn new(mean: Vector5, cov: &Matrix5) -> Self {
        let eig = symmetrize(cov).symmetric_eigen();
        let root = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        let factor = eig.eigenvectors * Matrix5::from_diagonal(&root);
        Self { mean, factor }
    }

    pub fn from_estimate(est: &GaussianEstimate) -> Self {
        Self::new(est.mean.to_vector(), &est.cov)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector5 {
        let z = Vector5::from_fn(|_, _| rng.sample(StandardNormal));
        self.mean + self.factor * z
    }
}

/// Covariances on disk: 25 row-major entries, or 5 diagonal entries.
pub mod cov_serde {
    use super::{Matrix5, Vector5};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(cov: &Matrix5, ser: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<f64> = cov.transpose().iter().copied().collect();
        ser.collect_seq(rows)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Matrix5, D::Error> {
        let values = Vec::<f64>::deserialize(de)?;
        from_slice(&values).map_err(D::Error::custom)
    }

    pub fn from_slice(values: &[f64]) -> Result<Matrix5, String> {
        match values.len() {
            5 => Ok(Matrix5::from_diagonal(&Vector5::from_column_slice(values))),
            25 => Ok(Matrix5::from_row_slice(values)),
            n => Err(format!("covariance needs 5 diagonal or 25 row-major entries, got {n}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn rejects_asymmetric_and_indefinite() {
        let mut c = Matrix5::identity();
        c[(0, 1)] = 0.5;
        assert!(check_covariance(&c).is_err());
        let c = Matrix5::from_diagonal(&Vector5::new(1.0, 1.0, -1.0, 1.0, 1.0));
        assert!(check_covariance(&c).is_err());
        assert!(check_covariance(&Matrix5::zeros()).is_ok());
    }

    #[test]
    fn zero_covariance_samples_the_mean() {
        let mean = Vector5::new(1.0, 2.0, 3.0, 4.0, 5.0);
        let sampler = GaussianSampler::new(mean, &Matrix5::zeros());
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        assert_eq!(sampler.sample(&mut rng), mean);
    }

    #[test]
    fn diagonal_shorthand_and_round_trip() {
        let est: GaussianEstimate =
            serde_json::from_str(r#"{"mean":{"m_x":0,"m_y":1,"alpha":0.5,"l":4,"w":2},"cov":[1,2,3,4,5]}"#).unwrap();
        assert_eq!(est.cov, Matrix5::from_diagonal(&Vector5::new(1.0, 2.0, 3.0, 4.0, 5.0)));
        let mut full = est;
        full.cov[(0, 4)] = 0.25;
        full.cov[(4, 0)] = 0.25;
        let text = serde_json::to_string(&full).unwrap();
        assert_eq!(serde_json::from_str::<GaussianEstimate>(&text).unwrap(), full);
        assert!(serde_json::from_str::<GaussianEstimate>(
            r#"{"mean":{"m_x":0,"m_y":1,"alpha":0.5,"l":4,"w":2},"cov":[1,2]}"#
        )
        .is_err());
    }
}
