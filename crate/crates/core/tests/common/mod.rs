#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use mmgw_core::EllipseState;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nodes and weights of the `n`-point Gauss-Hermite rule for the standard
/// normal density (Golub-Welsch). Weights sum to one.
pub fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Vec<(f64, f64)> = (0..n).map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2))).collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// `E f(Z)` for `Z ~ N(mean, var)`.
pub fn expect_normal(rule: &[(f64, f64)], mean: f64, var: f64, f: impl Fn(f64) -> f64) -> f64 {
    let sd = var.sqrt();
    rule.iter().map(|&(z, w)| w * f(mean + sd * z)).sum()
}

/// Square-root shape entries straight from the rotation form
/// `R diag(|l|, |w|) Rᵀ`.
pub fn root_entries(alpha: f64, l: f64, w: f64) -> [f64; 3] {
    let (s, c) = alpha.sin_cos();
    let (l, w) = (l.abs(), w.abs());
    [l * c * c + w * s * s, (l - w) * s * c, l * s * s + w * c * c]
}

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// A random state with positive semi-axes in `[lo, hi]` and any orientation.
pub fn random_state(rng: &mut impl Rng, lo: f64, hi: f64) -> EllipseState {
    EllipseState::new(
        uniform(rng, -10.0, 10.0),
        uniform(rng, -10.0, 10.0),
        uniform(rng, -TAU, TAU),
        uniform(rng, lo, hi),
        uniform(rng, lo, hi),
    )
}

/// Like [`random_state`] but with the axes at least `gap` apart.
pub fn random_elongated_state(rng: &mut impl Rng, lo: f64, hi: f64, gap: f64) -> EllipseState {
    loop {
        let s = random_state(rng, lo, hi);
        if (s.l - s.w).abs() >= gap {
            return s;
        }
    }
}

/// Distance between two orientations of an ellipse, which are only defined modulo π.
pub fn axis_angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}
