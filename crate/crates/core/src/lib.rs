//! Fusion of elliptic extended-target estimates that is optimal with respect
//! to the Gaussian Wasserstein (GW) distance between ellipses.
//!
//! An ellipse is described by its center, orientation and two semi-axes
//! ([`EllipseState`]). The same ellipse has several such descriptions, so
//! averaging parameters directly gives nonsense. This crate maps ellipses into
//! a square-root space ([`transform`]) where Euclidean distance approximates
//! the GW distance, fuses Gaussian estimates there, and maps the result back.
//!
//! Modules:
//! - [`ellipse`]: ellipse parameters, shape matrices and equivalent parametrizations
//! - [`transform`]: the square-root transform, its inverse and its Jacobian
//! - [`metrics`]: exact and approximate GW distances, RMGW aggregation
//! - [`fusion`]: naive, shape-mean, MMGW-Lin, MMGW-MC and heuristic fusers
//! - [`harness`]: the seeded Monte-Carlo comparison experiment
//! - [`cli`]: the `mmgw` command-line front end

pub mod cli;
pub mod ellipse;
pub mod error;
pub mod fusion;
pub mod gaussian;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod transform;

pub use ellipse::{equivalent_parametrizations, permute_covariance, shape_matrix, sqrt_spd, EllipseState, ShapeMatrix};
pub use error::{Error, Result};
pub use fusion::{FusionInput, FusionResult, Method};
pub use gaussian::{GaussianEstimate, Matrix5, TransformedGaussian, Vector5};
pub use harness::{run_experiment, RunReport, ScenarioConfig};
pub use metrics::{aggregate_rmgw, gw_approx, gw_approx_frobenius, gw_exact, gw_exact_trace_form, GwValue};
pub use transform::{inverse_transform, jacobian, transform, TransformedState};

/// Absolute tolerance for positive-semidefiniteness checks.
pub const PSD_EPS: f64 = 1e-12;

/// Tolerance for symmetry and round-trip checks.
pub const ROUND_TRIP_EPS: f64 = 1e-9;
