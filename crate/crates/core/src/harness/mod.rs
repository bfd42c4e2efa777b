//! Seeded Monte-Carlo comparison of the fusion methods.
//!
//! Each run draws two noisy estimates around a ground-truth ellipse, fuses
//! them with every selected method and scores the result against the ground
//! truth with the exact GW distance.

mod report;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use report::{deserialize_report, serialize_report, MethodReport, ReportFormat, RunReport};

use crate::ellipse::{permute_covariance, EllipseState};
use crate::error::{Error, Result};
use crate::fusion::{fuse, FusionInput, FusionOptions, HeuristicCriterion, Method};
use crate::gaussian::{check_covariance, cov_serde, GaussianEstimate, GaussianSampler, Matrix5, Vector5};
use crate::metrics::{gw_exact, Aggregation};
use crate::rng::{stream, Lane, SampleSeeds};

/// Definition of one comparison experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// `[m_x, m_y, alpha, l, w]`.
    #[serde(with = "state_array")]
    pub ground_truth: EllipseState,
    #[serde(with = "cov_serde")]
    pub cov1: Matrix5,
    #[serde(with = "cov_serde")]
    pub cov2: Matrix5,
    pub runs: usize,
    pub mc_samples: usize,
    pub seed: u64,
    /// Report sensor 2 in its `k = 1` parametrization (quarter turn, axes swapped).
    pub swap_sensor2: bool,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub aggregation: Aggregation,
    #[serde(default)]
    pub heuristic_criterion: HeuristicCriterion,
}

impl ScenarioConfig {
    /// Two sensors observing an ellipse with semi-axes 4 and 2; the second
    /// sensor has three times the positional variance and reports in the
    /// swapped parametrization. 100 runs, 1000 particles.
    pub fn paper() -> Self {
        Self {
            ground_truth: EllipseState::new(0.0, 1.0, FRAC_PI_2, 4.0, 2.0),
            cov1: Matrix5::from_diagonal(&Vector5::new(0.5, 0.5, 0.2, 1.0, 0.2)),
            cov2: Matrix5::from_diagonal(&Vector5::new(1.5, 1.5, 0.2, 1.0, 0.2)),
            runs: 100,
            mc_samples: 1000,
            seed: 0,
            swap_sensor2: true,
            methods: Method::ALL.to_vec(),
            aggregation: Aggregation::RootMean,
            heuristic_criterion: HeuristicCriterion::Likelihood,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidInput("runs must be at least 1".into()));
        }
        if self.mc_samples < 2 {
            return Err(Error::InvalidInput("mc_samples must be at least 2".into()));
        }
        self.ground_truth.check_finite()?;
        check_covariance(&self.cov1).map_err(|e| Error::InvalidInput(format!("cov1: {e}")))?;
        check_covariance(&self.cov2).map_err(|e| Error::InvalidInput(format!("cov2: {e}")))?;
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(Error::InvalidInput(format!("method `{m}` listed twice")));
            }
        }
        Ok(())
    }

    fn fusion_options(&self, run_index: usize) -> FusionOptions {
        let mut rng = stream(self.seed, run_index as u64, Lane::MonteCarlo);
        FusionOptions {
            samples: self.mc_samples,
            seeds: SampleSeeds([rng.next_u64(), rng.next_u64()]),
            criterion: self.heuristic_criterion,
        }
    }
}

/// Draws the two sensor estimates of run `run_index`.
pub fn generate_trial(config: &ScenarioConfig, run_index: usize) -> FusionInput {
    let truth = config.ground_truth.to_vector();
    let draw = |cov: &Matrix5, lane| {
        let mut rng = stream(config.seed, run_index as u64, lane);
        EllipseState::from_vector(&GaussianSampler::new(truth, cov).sample(&mut rng))
    };
    let est1 = GaussianEstimate::new(draw(&config.cov1, Lane::Sensor1), config.cov1);
    let raw2 = draw(&config.cov2, Lane::Sensor2);
    let est2 = if config.swap_sensor2 {
        GaussianEstimate::new(raw2.equivalent(1), permute_covariance(&config.cov2, 1))
    } else {
        GaussianEstimate::new(raw2, config.cov2)
    };
    FusionInput::new(est1, est2)
}

fn score_run(config: &ScenarioConfig, run_index: usize) -> Vec<Result<f64>> {
    let input = generate_trial(config, run_index);
    let options = config.fusion_options(run_index);
    config
        .methods
        .iter()
        .map(|&m| {
            let fused = fuse(&input, m, &options)?;
            Ok(gw_exact(&fused.fused, &config.ground_truth)?.value())
        })
        .collect()
}

/// Runs every trial (in parallel) and aggregates the GW errors per method.
///
/// A method failing on a run is recorded in that method's `failed_runs` and
/// left out of its aggregate; configuration errors abort.
pub fn run_experiment(config: &ScenarioConfig) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let per_run: Vec<Vec<Result<f64>>> = (0..config.runs).into_par_iter().map(|i| score_run(config, i)).collect();

    let mut methods = BTreeMap::new();
    for (j, &method) in config.methods.iter().enumerate() {
        let per_run_gw: Vec<Option<f64>> = per_run.iter().map(|r| r[j].as_ref().ok().copied()).collect();
        methods.insert(method, MethodReport::from_runs(per_run_gw, config.aggregation));
    }
    Ok(RunReport { scenario: config.clone(), methods, wall_time: start.elapsed().as_secs_f64() })
}

/// Ellipse states as plain `[m_x, m_y, alpha, l, w]` arrays.
pub mod state_array {
    use crate::ellipse::EllipseState;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(state: &EllipseState, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(state.to_array())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<EllipseState, D::Error> {
        <[f64; 5]>::deserialize(de).map(EllipseState::from_array)
    }
}
