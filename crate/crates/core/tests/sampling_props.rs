mod common;

use common::lognormal_counts;
use phi_core::sampling::{
    bin_summaries, clt_envelope, coverage, empirical_se, log_log_slope, run_simulation, Replacement, SimulationConfig,
};
use phi_core::stats::describe_counts;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[test]
fn unit_standard_error_at_n_400() {
    let pop = lognormal_counts(50_000, 1.5, 1.1, 77);
    let cfg = SimulationConfig::new(vec![400], 10_000, 400, Replacement::WithoutReplacement).unwrap();
    let res = run_simulation(&pop, &cfg).unwrap();
    let se = empirical_se(&res, None).unwrap();
    assert!((se - 1.0).abs() <= 0.05, "{se}");
    let inside = res.points.iter().filter(|p| p.phi.abs() <= 3.0).count() as f64 / res.points.len() as f64;
    assert!(inside >= 0.99, "{inside}");
    // Same thing through the envelope form.
    assert_eq!(
        coverage(&res.points, res.population_mu, res.population_sigma, 3.0).unwrap(),
        inside
    );
}

#[test]
fn normal_population_k2_coverage() {
    let mut rng = ChaCha8Rng::seed_from_u64(95);
    let normal = Normal::new(50.0f64, 10.0).unwrap();
    let pop: Vec<u64> = (0..100_000)
        .map(|_| normal.sample(&mut rng).round().max(0.0) as u64)
        .collect();
    let cfg = SimulationConfig::new(vec![1000], 20_000, 2, Replacement::WithReplacement).unwrap();
    let res = run_simulation(&pop, &cfg).unwrap();
    let cov = coverage(&res.points, res.population_mu, res.population_sigma, 2.0).unwrap();
    assert!((cov - 0.9545).abs() <= 0.01, "{cov}");
}

#[test]
fn heavy_tail_small_n_is_reported() {
    // One paper dwarfs the rest of the field.
    let mut pop = lognormal_counts(5_000, 0.5, 1.0, 3);
    pop[17] = 3684;
    let skew = describe_counts(&pop).unwrap().skewness.unwrap();
    assert!(skew > 30.0, "{skew}");
    let cfg = SimulationConfig::new(vec![5, 20], 5_000, 9, Replacement::WithoutReplacement).unwrap();
    let res = run_simulation(&pop, &cfg).unwrap();
    for n in [5, 20] {
        let se = empirical_se(&res, Some(n)).unwrap();
        assert!(se.is_finite() && se > 0.0);
        println!("n={n}: empirical SE(Φ) = {se:.3}");
    }
}

#[test]
fn phi_spread_is_scale_free_while_f_spread_shrinks() {
    let pop = lognormal_counts(60_000, 1.2, 0.9, 11);
    let cfg = SimulationConfig::new(
        vec![100, 200, 400, 800, 1600, 3200],
        4_000,
        5,
        Replacement::WithoutReplacement,
    )
    .unwrap();
    let res = run_simulation(&pop, &cfg).unwrap();
    let bins = bin_summaries(&res);
    let stds: Vec<f64> = bins.iter().map(|b| b.std_phi).collect();
    let (lo, hi) = stds
        .iter()
        .fold((f64::MAX, f64::MIN), |(l, h), &s| (l.min(s), h.max(s)));
    assert!(hi / lo - 1.0 < 0.10, "{stds:?}");

    let slope = log_log_slope(&bins.iter().map(|b| (b.n as f64, b.std_f)).collect::<Vec<_>>()).unwrap();
    assert!((slope + 0.5).abs() <= 0.05, "{slope}");

    for p in &res.points {
        let expect = (p.f_n - res.population_mu) * (p.n as f64).sqrt() / res.population_sigma;
        assert!((p.phi - expect).abs() <= 1e-12 * expect.abs().max(1e-12));
    }
}

#[test]
fn exhaustive_draws_sit_on_the_mean() {
    let pop = lognormal_counts(2_000, 1.5, 1.1, 4);
    let cfg = SimulationConfig::new(vec![2_000], 25, 1, Replacement::WithoutReplacement).unwrap();
    let res = run_simulation(&pop, &cfg).unwrap();
    assert!(res.points.iter().all(|p| p.f_n == res.population_mu && p.phi == 0.0));
}

#[test]
fn result_does_not_depend_on_thread_count() {
    let pop = lognormal_counts(20_000, 1.5, 1.1, 8);
    let cfg = SimulationConfig::new(vec![10, 50, 250, 1250], 300, 123, Replacement::WithoutReplacement).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_simulation(&pop, &cfg).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run_simulation(&pop, &cfg).unwrap());
    assert_eq!(single, many);
    assert_eq!(single.points.len(), 4 * 300);
    // Points come out in grid order.
    assert!(single.points.windows(2).all(|w| w[0].n <= w[1].n));
}

#[test]
fn envelope_contains_about_the_right_share() {
    let pop = lognormal_counts(40_000, 1.0, 0.8, 21);
    let cfg = SimulationConfig::new(vec![500, 2000], 3_000, 77, Replacement::WithReplacement).unwrap();
    let res = run_simulation(&pop, &cfg).unwrap();
    let env = clt_envelope(res.population_mu, res.population_sigma, 3.0, &cfg.size_grid).unwrap();
    let inside = res
        .points
        .iter()
        .filter(|p| {
            let e = env.points.iter().find(|e| e.n == p.n).unwrap();
            p.f_n >= e.lower && p.f_n <= e.upper
        })
        .count() as f64
        / res.points.len() as f64;
    assert!(inside > 0.99, "{inside}");
}
