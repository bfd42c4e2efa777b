mod common;

use common::{random_elongated_state, rng, root_entries, uniform};
use mmgw_core::fusion::{fuse_mmgw_lin, fuse_mmgw_mc_seeded, fuse_naive, kalman_combine, linearized_moments};
use mmgw_core::harness::generate_trial;
use mmgw_core::rng::SampleSeeds;
use mmgw_core::{
    gw_exact, gw_exact_trace_form, EllipseState, FusionInput, GaussianEstimate, Matrix5, Method, ScenarioConfig,
    Vector5,
};
use nalgebra::{Matrix2, Matrix5x1};
use rand::Rng;

fn t_oracle(x: &Vector5) -> Vector5 {
    let [s11, s12, s22] = root_entries(x[2], x[3], x[4]);
    Vector5::new(x[0], x[1], s11, s12, s22)
}

/// Jacobian of the rotation form `R diag(l, w) Rᵀ` for positive axes.
fn jacobian_oracle(x: &Vector5) -> Matrix5 {
    let (alpha, l, w) = (x[2], x[3], x[4]);
    let (s, c) = alpha.sin_cos();
    let (s2, c2) = (2.0 * alpha).sin_cos();
    let d = l - w;
    let mut j = Matrix5::zeros();
    j[(0, 0)] = 1.0;
    j[(1, 1)] = 1.0;
    #[rustfmt::skip]
    let shape_block = nalgebra::Matrix3::new(
        -d * s2, c * c, s * s,
        d * c2, s * c, -s * c,
        d * s2, s * s, c * c,
    );
    j.fixed_view_mut::<3, 3>(2, 2).copy_from(&shape_block);
    j
}

fn random_cov(r: &mut impl Rng) -> Matrix5 {
    let a = Matrix5::from_fn(|_, _| uniform(r, -0.5, 0.5));
    a * a.transpose() + Matrix5::identity() * 0.05
}

#[test]
fn lin_fusion_matches_direct_recomputation() {
    let mut r = rng(21);
    for _ in 0..200 {
        let x1 = random_elongated_state(&mut r, 0.5, 5.0, 0.3);
        let x2 = random_elongated_state(&mut r, 0.5, 5.0, 0.3);
        let (c1, c2) = (random_cov(&mut r), random_cov(&mut r));
        let input = FusionInput::new(GaussianEstimate::new(x1, c1), GaussianEstimate::new(x2, c2));
        let (t1, t2) = (linearized_moments(&input.est1).unwrap(), linearized_moments(&input.est2).unwrap());
        let got = kalman_combine(&t1.mean.to_vector(), &t1.cov, &t2.mean.to_vector(), &t2.cov).unwrap().mean;
        if let Ok(fused) = fuse_mmgw_lin(&input) {
            assert_eq!(fused.fused_transformed.unwrap().mean.to_vector(), got);
        }

        let (v1, v2) = (x1.to_vector(), x2.to_vector());
        let (h1, h2) = (jacobian_oracle(&v1), jacobian_oracle(&v2));
        let (p1, p2) = (h1 * c1 * h1.transpose(), h2 * c2 * h2.transpose());
        let inv = (p1 + p2).try_inverse().unwrap();
        let want: Matrix5x1<f64> = p2 * inv * t_oracle(&v1) + p1 * inv * t_oracle(&v2);
        assert!((got - want).amax() < 1e-10 * want.amax().max(1.0), "{got} vs {want}");
    }
}

#[test]
fn exact_distance_agrees_with_the_trace_formula() {
    let mut r = rng(22);
    for _ in 0..500 {
        let a = random_elongated_state(&mut r, 0.2, 6.0, 0.0);
        let b = random_elongated_state(&mut r, 0.2, 6.0, 0.0);
        let fast = gw_exact(&a, &b).unwrap().value();
        let slow = gw_exact_trace_form(&a, &b).unwrap().value();
        assert!((fast - slow).abs() <= 1e-9 * slow.max(1.0), "{fast} vs {slow}");
    }
}

#[test]
fn exact_distance_of_diagonal_shapes_is_the_frobenius_gap() {
    let mut r = rng(23);
    for _ in 0..200 {
        let [l1, w1, l2, w2] = [(); 4].map(|_| uniform(&mut r, 0.0, 5.0));
        let a = EllipseState::new(0.0, 0.0, 0.0, l1, w1);
        let b = EllipseState::new(1.0, 2.0, 0.0, l2, w2);
        let root_gap = Matrix2::new(l1 - l2, 0.0, 0.0, w1 - w2).norm_squared();
        assert!((gw_exact(&a, &b).unwrap().value() - (5.0 + root_gap)).abs() < 1e-10);
    }
}

#[test]
fn mc_beats_naive_on_almost_every_paper_trial() {
    let cfg = ScenarioConfig::paper().with_seed(99);
    let wins = (0..100)
        .filter(|&run| {
            let input = generate_trial(&cfg, run);
            let mc = fuse_mmgw_mc_seeded(&input, 1000, SampleSeeds([run as u64, run as u64 + 1000])).unwrap();
            let naive = fuse_naive(&input).unwrap();
            gw_exact(&mc.fused, &cfg.ground_truth).unwrap().value()
                < gw_exact(&naive.fused, &cfg.ground_truth).unwrap().value()
        })
        .count();
    assert!(wins >= 95, "mmgw_mc beat naive on {wins}/100 trials");
}

#[test]
fn sensor_draws_have_the_configured_moments() {
    let cfg = ScenarioConfig { swap_sensor2: false, ..ScenarioConfig::paper().with_seed(5) };
    let n = 10_000;
    let truth = cfg.ground_truth.to_vector();
    let draws: Vec<Vector5> = (0..n).map(|i| generate_trial(&cfg, i).est2.mean.to_vector() - truth).collect();
    let mean = draws.iter().sum::<Vector5>() / n as f64;
    for c in 0..5 {
        let sd = cfg.cov2[(c, c)].sqrt();
        let var = draws.iter().map(|d| (d[c] - mean[c]).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var / cfg.cov2[(c, c)] - 1.0).abs() < 0.05, "component {c}: variance {var}");
        assert!(mean[c].abs() < 4.0 * sd / (n as f64).sqrt(), "component {c}: mean offset {}", mean[c]);
    }
}

#[test]
fn naive_stays_worse_than_mc_across_seeds() {
    for seed in 0..20 {
        let cfg =
            ScenarioConfig { methods: vec![Method::Naive, Method::MmgwMc], ..ScenarioConfig::paper().with_seed(seed) };
        let report = mmgw_core::run_experiment(&cfg).unwrap();
        assert!(report.rmgw(Method::Naive).unwrap() > report.rmgw(Method::MmgwMc).unwrap(), "seed {seed}");
    }
}
