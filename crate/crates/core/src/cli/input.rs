//! Files read by the CLI.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::CliError;
use crate::ellipse::EllipseState;
use crate::gaussian::{cov_serde, GaussianEstimate, Matrix5};
use crate::harness::ScenarioConfig;

/// One estimate on disk:
///
/// ```json
/// { "mean": [m_x, m_y, alpha, l, w], "cov": [5 diagonal or 25 row-major entries] }
/// ```
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateFile {
    pub mean: [f64; 5],
    #[serde(default)]
    pub cov: Option<Vec<f64>>,
}

impl EstimateFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    pub fn state(&self, degrees: bool) -> EllipseState {
        let mut state = EllipseState::from_array(self.mean);
        if degrees {
            state.alpha = state.alpha.to_radians();
        }
        state
    }

    /// The estimate, with a zero covariance when `cov` is absent and
    /// `require_cov` is false.
    pub fn estimate(&self, degrees: bool, require_cov: bool) -> Result<GaussianEstimate, CliError> {
        let cov = match &self.cov {
            Some(values) => {
                let mut cov = cov_serde::from_slice(values).map_err(CliError::input)?;
                if degrees {
                    scale_angle_row_col(&mut cov, 1f64.to_radians());
                }
                cov
            }
            None if require_cov => return Err(CliError::input("estimate file has no `cov` entry")),
            None => Matrix5::zeros(),
        };
        let est = GaussianEstimate::new(self.state(degrees), cov);
        est.validate().map_err(CliError::from)?;
        Ok(est)
    }
}

fn scale_angle_row_col(cov: &mut Matrix5, factor: f64) {
    cov.row_mut(2).scale_mut(factor);
    cov.column_mut(2).scale_mut(factor);
}

/// Reads a scenario, optionally layered over the built-in defaults: keys
/// present in the file override the defaults.
pub fn load_scenario(path: Option<&Path>, defaults: Option<ScenarioConfig>) -> Result<ScenarioConfig, CliError> {
    let file = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            Some(serde_json::from_str::<Value>(&text).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?)
        }
        None => None,
    };
    let merged = match (defaults, file) {
        (Some(base), Some(overrides)) => {
            let mut base = serde_json::to_value(base).expect("scenario serializes");
            match (base.as_object_mut(), overrides) {
                (Some(obj), Value::Object(over)) => obj.extend(over),
                _ => return Err(CliError::input("scenario file must contain a JSON object")),
            }
            base
        }
        (Some(base), None) => return Ok(base),
        (None, Some(file)) => file,
        (None, None) => return Err(CliError::input("eval needs --config PATH, --paper, or both")),
    };
    ScenarioConfig::deserialize(merged).map_err(|e| CliError::input(format!("invalid scenario: {e}")))
}
