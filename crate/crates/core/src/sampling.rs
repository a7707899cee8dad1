//! Random sample test: Monte-Carlo "journals" drawn from a field's papers.
//!
//! By the Central Limit Theorem the citation average `f_n` of `n` papers drawn
//! at random from a population with mean `mu` and deviation `sigma` has
//! spread `sigma / sqrt(n)`, so it falls inside `mu ± k·sigma/sqrt(n)` with the
//! usual normal coverage. Φ rescales that spread away, which is what the
//! simulations here check empirically.
//!
//! Each size bin gets its own ChaCha stream derived from the master seed, so
//! bins run in parallel and the output only depends on `(population, config)`.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::JournalAggregate;
use crate::phi::phi_index;
use crate::stats::{describe, describe_counts};

#[derive(Debug, Error, PartialEq)]
pub enum SamplingError {
    #[error("population is empty")]
    EmptyPopulation,
    #[error("population has zero spread; Φ is undefined")]
    DegeneratePopulation,
    #[error("sample size {n} is out of range for a population of {population} without replacement")]
    SizeOutOfRange { n: u64, population: usize },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("need at least 2 points, found {0}")]
    InsufficientPoints(usize),
    #[error("no entries to evaluate")]
    EmptyInput,
    #[error("sigma must be positive and finite, got {0}")]
    NonPositiveSigma(f64),
    #[error("envelope multiplier must be non-negative, got {0}")]
    NegativeK(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Replacement {
    /// A journal cannot contain the same paper twice.
    #[default]
    WithoutReplacement,
    WithReplacement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub size_grid: Vec<u64>,
    pub draws_per_size: usize,
    pub seed: u64,
    pub replacement: Replacement,
}

/// Default grid: 16 sizes log-spaced over 10..=10,000.
pub const DEFAULT_GRID_POINTS: usize = 16;
/// Draws per size so the default run holds 40,000 random journals.
pub const DEFAULT_DRAWS_PER_SIZE: usize = 2_500;

impl SimulationConfig {
    pub fn new(
        size_grid: Vec<u64>,
        draws_per_size: usize,
        seed: u64,
        replacement: Replacement,
    ) -> Result<SimulationConfig, SamplingError> {
        if size_grid.is_empty() {
            return Err(SamplingError::InvalidConfig("empty size grid".into()));
        }
        if size_grid.contains(&0) {
            return Err(SamplingError::InvalidConfig("sizes must be positive".into()));
        }
        if size_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SamplingError::InvalidConfig(
                "size grid must be strictly ascending".into(),
            ));
        }
        if draws_per_size == 0 {
            return Err(SamplingError::InvalidConfig("draws per size must be ≥ 1".into()));
        }
        Ok(SimulationConfig {
            size_grid,
            draws_per_size,
            seed,
            replacement,
        })
    }

    pub fn with_defaults(seed: u64) -> SimulationConfig {
        SimulationConfig {
            size_grid: log_size_grid(10, 10_000, DEFAULT_GRID_POINTS),
            draws_per_size: DEFAULT_DRAWS_PER_SIZE,
            seed,
            replacement: Replacement::WithoutReplacement,
        }
    }
}

/// `count` sizes spaced evenly in log space between `min` and `max`
/// (inclusive), rounded to integers and deduplicated.
pub fn log_size_grid(min: u64, max: u64, count: usize) -> Vec<u64> {
    if count <= 1 || min >= max {
        return vec![min.max(1)];
    }
    let (lo, hi) = ((min.max(1) as f64).ln(), (max as f64).ln());
    let mut grid: Vec<u64> = (0..count)
        .map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp().round() as u64)
        .collect();
    grid.dedup();
    grid
}

/// One random journal: its size, citation average and Φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimPoint {
    pub n: u64,
    pub f_n: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub points: Vec<SimPoint>,
    pub population_mu: f64,
    pub population_sigma: f64,
    pub config: SimulationConfig,
}

fn check_size(population: usize, n: u64, replacement: Replacement) -> Result<(), SamplingError> {
    let ok = match replacement {
        Replacement::WithoutReplacement => n >= 1 && n as usize <= population,
        Replacement::WithReplacement => n >= 1 && population > 0,
    };
    if ok {
        Ok(())
    } else {
        Err(SamplingError::SizeOutOfRange { n, population })
    }
}

fn sample_indices<R: Rng + ?Sized>(rng: &mut R, population: usize, n: usize, replacement: Replacement) -> Vec<usize> {
    match replacement {
        Replacement::WithoutReplacement => index::sample(rng, population, n).into_vec(),
        Replacement::WithReplacement => (0..n).map(|_| rng.random_range(0..population)).collect(),
    }
}

/// Draws `n` papers uniformly from `population`.
pub fn draw_random_journal<R: Rng + ?Sized>(
    population: &[u64],
    n: u64,
    replacement: Replacement,
    rng: &mut R,
) -> Result<Vec<u64>, SamplingError> {
    check_size(population.len(), n, replacement)?;
    Ok(sample_indices(rng, population.len(), n as usize, replacement)
        .into_iter()
        .map(|i| population[i])
        .collect())
}

/// Per-bin generator: the master seed picks the key, the bin index the stream.
fn bin_rng(seed: u64, bin: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(bin as u64);
    rng
}

/// Runs the random sample test over every size in the grid.
pub fn run_simulation(population: &[u64], config: &SimulationConfig) -> Result<SimulationResult, SamplingError> {
    if population.is_empty() {
        return Err(SamplingError::EmptyPopulation);
    }
    let moments = describe_counts(population).map_err(|_| SamplingError::EmptyPopulation)?;
    if moments.std <= 0.0 {
        return Err(SamplingError::DegeneratePopulation);
    }
    // Re-validate in case the config was built field by field.
    let config = SimulationConfig::new(
        config.size_grid.clone(),
        config.draws_per_size,
        config.seed,
        config.replacement,
    )?;
    for &n in &config.size_grid {
        check_size(population.len(), n, config.replacement)?;
    }
    let (mu, sigma) = (moments.mean, moments.std);

    let bins: Vec<Vec<SimPoint>> = config
        .size_grid
        .par_iter()
        .enumerate()
        .map(|(bin, &n)| {
            let mut rng = bin_rng(config.seed, bin);
            (0..config.draws_per_size)
                .map(|_| {
                    let total: u64 = sample_indices(&mut rng, population.len(), n as usize, config.replacement)
                        .into_iter()
                        .map(|i| population[i])
                        .sum();
                    let f_n = total as f64 / n as f64;
                    let phi = phi_index(f_n, n, mu, sigma).expect("validated inputs");
                    SimPoint { n, f_n, phi }
                })
                .collect()
        })
        .collect();

    Ok(SimulationResult {
        points: bins.into_iter().flatten().collect(),
        population_mu: mu,
        population_sigma: sigma,
        config,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePoint {
    pub n: u64,
    pub lower: f64,
    pub upper: f64,
}

/// `mu ± k·sigma/sqrt(n)` materialized on a size grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub k: f64,
    pub points: Vec<EnvelopePoint>,
}

/// No finite-population correction is applied.
pub fn clt_envelope(mu: f64, sigma: f64, k: f64, size_grid: &[u64]) -> Result<Envelope, SamplingError> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(SamplingError::NonPositiveSigma(sigma));
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(SamplingError::NegativeK(k));
    }
    if size_grid.contains(&0) {
        return Err(SamplingError::InvalidConfig("sizes must be positive".into()));
    }
    Ok(Envelope {
        k,
        points: size_grid
            .iter()
            .map(|&n| {
                let half = k * sigma / (n as f64).sqrt();
                EnvelopePoint {
                    n,
                    lower: mu - half,
                    upper: mu + half,
                }
            })
            .collect(),
    })
}

/// Anything with a size and a citation average: simulated points, real
/// journals, or plain `(n, f)` pairs.
pub trait SizedAverage {
    fn size(&self) -> u64;
    fn average(&self) -> f64;
}

impl SizedAverage for SimPoint {
    fn size(&self) -> u64 {
        self.n
    }
    fn average(&self) -> f64 {
        self.f_n
    }
}

impl SizedAverage for JournalAggregate {
    fn size(&self) -> u64 {
        self.n
    }
    fn average(&self) -> f64 {
        self.f
    }
}

impl SizedAverage for (u64, f64) {
    fn size(&self) -> u64 {
        self.0
    }
    fn average(&self) -> f64 {
        self.1
    }
}

/// Fraction of entries inside the closed k-envelope, `|f - mu| ≤ k·sigma/sqrt(n)`.
pub fn coverage<T: SizedAverage>(items: &[T], mu: f64, sigma: f64, k: f64) -> Result<f64, SamplingError> {
    if items.is_empty() {
        return Err(SamplingError::EmptyInput);
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(SamplingError::NonPositiveSigma(sigma));
    }
    if k.is_nan() || k < 0.0 {
        return Err(SamplingError::NegativeK(k));
    }
    let inside = items
        .iter()
        .filter(|it| (it.average() - mu).abs() <= k * sigma / (it.size() as f64).sqrt())
        .count();
    Ok(inside as f64 / items.len() as f64)
}

/// Population standard deviation of Φ over the points, optionally only those
/// of size `n`. Reported as observed; no threshold is applied.
pub fn empirical_se(result: &SimulationResult, n: Option<u64>) -> Result<f64, SamplingError> {
    let phis: Vec<f64> = result
        .points
        .iter()
        .filter(|p| n.is_none_or(|n| p.n == n))
        .map(|p| p.phi)
        .collect();
    if phis.len() < 2 {
        return Err(SamplingError::InsufficientPoints(phis.len()));
    }
    Ok(describe(&phis).expect("non-empty finite").std)
}

/// Spread of one size bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSummary {
    pub n: u64,
    pub draws: usize,
    pub mean_f: f64,
    pub std_f: f64,
    pub std_phi: f64,
}

pub fn bin_summaries(result: &SimulationResult) -> Vec<BinSummary> {
    result
        .config
        .size_grid
        .iter()
        .filter_map(|&n| {
            let (fs, phis): (Vec<f64>, Vec<f64>) = result
                .points
                .iter()
                .filter(|p| p.n == n)
                .map(|p| (p.f_n, p.phi))
                .unzip();
            let mf = describe(&fs).ok()?;
            let mp = describe(&phis).ok()?;
            Some(BinSummary {
                n,
                draws: fs.len(),
                mean_f: mf.mean,
                std_f: mf.std,
                std_phi: mp.std,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xy: &[(f64, f64)]) -> Result<f64, SamplingError> {
    if xy.len() < 2 {
        return Err(SamplingError::InsufficientPoints(xy.len()));
    }
    let pts: Vec<(f64, f64)> = xy.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(SamplingError::InvalidConfig("log-log fit needs positive values".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(SamplingError::InvalidConfig("log-log fit needs distinct sizes".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn skewed_population(len: usize) -> Vec<u64> {
        (0..len as u64)
            .map(|i| (i * i) % 97 + if i % 50 == 0 { 400 } else { 0 })
            .collect()
    }

    #[test]
    fn exhaustive_sample_reproduces_mean() {
        let pop = skewed_population(500);
        let mu = describe_counts(&pop).unwrap().mean;
        let mut rng = bin_rng(3, 0);
        let s = draw_random_journal(&pop, 500, Replacement::WithoutReplacement, &mut rng).unwrap();
        let mean = s.iter().sum::<u64>() as f64 / 500.0;
        assert_eq!(mean, mu);

        let cfg = SimulationConfig::new(vec![250, 500], 20, 11, Replacement::WithoutReplacement).unwrap();
        let res = run_simulation(&pop, &cfg).unwrap();
        for p in res.points.iter().filter(|p| p.n == 500) {
            assert_eq!(p.f_n, res.population_mu);
            assert_eq!(p.phi, 0.0);
        }
    }

    #[test]
    fn singleton_sample() {
        let pop = skewed_population(40);
        let mut rng = bin_rng(9, 2);
        for mode in [Replacement::WithoutReplacement, Replacement::WithReplacement] {
            let s = draw_random_journal(&pop, 1, mode, &mut rng).unwrap();
            assert_eq!(s.len(), 1);
            assert!(pop.contains(&s[0]));
        }
    }

    #[test]
    fn size_range_errors() {
        let pop = vec![1, 2, 3];
        let mut rng = bin_rng(0, 0);
        assert!(draw_random_journal(&pop, 4, Replacement::WithoutReplacement, &mut rng).is_err());
        assert!(draw_random_journal(&pop, 0, Replacement::WithReplacement, &mut rng).is_err());
        assert_eq!(
            draw_random_journal(&pop, 10, Replacement::WithReplacement, &mut rng)
                .unwrap()
                .len(),
            10
        );
    }

    #[test]
    fn same_seed_same_samples() {
        let pop = skewed_population(1000);
        let run = |seed| {
            let mut rng = bin_rng(seed, 0);
            (0..5)
                .map(|_| draw_random_journal(&pop, 30, Replacement::WithoutReplacement, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(42), run(42));
        assert_ne!(run(42), run(43));
    }

    #[test]
    fn small_run_is_consistent() {
        let pop = skewed_population(300);
        let cfg = SimulationConfig::new(vec![10], 3, 42, Replacement::WithoutReplacement).unwrap();
        let res = run_simulation(&pop, &cfg).unwrap();
        assert_eq!(res.points.len(), 3);
        for p in &res.points {
            let expect = (p.f_n - res.population_mu) * (p.n as f64).sqrt() / res.population_sigma;
            assert!((p.phi - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
        assert_eq!(res, run_simulation(&pop, &cfg).unwrap());
    }

    #[test]
    fn degenerate_population_is_rejected() {
        let cfg = SimulationConfig::new(vec![1], 1, 0, Replacement::WithReplacement).unwrap();
        assert_eq!(
            run_simulation(&[4, 4, 4], &cfg),
            Err(SamplingError::DegeneratePopulation)
        );
        assert_eq!(run_simulation(&[], &cfg), Err(SamplingError::EmptyPopulation));
        let too_big = SimulationConfig::new(vec![5], 1, 0, Replacement::WithoutReplacement).unwrap();
        assert!(matches!(
            run_simulation(&[1, 2, 3], &too_big),
            Err(SamplingError::SizeOutOfRange { n: 5, .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SimulationConfig::new(vec![], 1, 0, Replacement::default()).is_err());
        assert!(SimulationConfig::new(vec![10, 5], 1, 0, Replacement::default()).is_err());
        assert!(SimulationConfig::new(vec![10], 0, 0, Replacement::default()).is_err());
        let d = SimulationConfig::with_defaults(1);
        assert_eq!(d.size_grid.first(), Some(&10));
        assert_eq!(d.size_grid.last(), Some(&10_000));
        assert_eq!(d.size_grid.len() * d.draws_per_size, 40_000);
    }

    #[test]
    fn envelope_examples() {
        let e = clt_envelope(4.11, 12.5, 3.0, &[100]).unwrap();
        let p = e.points[0];
        assert!((p.lower - 0.36).abs() < 1e-9 && (p.upper - 7.86).abs() < 1e-9);

        let flat = clt_envelope(4.11, 12.5, 0.0, &[1, 50]).unwrap();
        assert!(flat.points.iter().all(|p| p.lower == 4.11 && p.upper == 4.11));

        let e = clt_envelope(0.0, 2.0, 2.0, &[25, 100]).unwrap();
        let half = |p: &EnvelopePoint| (p.upper - p.lower) / 2.0;
        assert!((half(&e.points[1]) - half(&e.points[0]) / 2.0).abs() < 1e-15);

        assert!(clt_envelope(0.0, 0.0, 1.0, &[1]).is_err());
        assert!(clt_envelope(0.0, 1.0, -1.0, &[1]).is_err());
    }

    #[test]
    fn coverage_edges() {
        let at_mean = vec![(10u64, 5.0), (400, 5.0)];
        assert_eq!(coverage(&at_mean, 5.0, 2.0, 0.5).unwrap(), 1.0);
        // mu=0, sigma=2, n=4, k=1: envelope edge is exactly 1.
        assert_eq!(coverage(&[(4u64, 1.0)], 0.0, 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(coverage(&[(4u64, 1.0000001)], 0.0, 2.0, 1.0).unwrap(), 0.0);
        assert_eq!(
            coverage::<(u64, f64)>(&[], 0.0, 1.0, 1.0),
            Err(SamplingError::EmptyInput)
        );
    }

    #[test]
    fn empirical_se_of_constant_points_is_zero() {
        let res = SimulationResult {
            points: vec![
                SimPoint {
                    n: 5,
                    f_n: 1.0,
                    phi: 0.7
                };
                4
            ],
            population_mu: 1.0,
            population_sigma: 1.0,
            config: SimulationConfig::new(vec![5], 4, 0, Replacement::default()).unwrap(),
        };
        assert_eq!(empirical_se(&res, None).unwrap(), 0.0);
        assert_eq!(empirical_se(&res, Some(6)), Err(SamplingError::InsufficientPoints(0)));
    }

    #[test]
    fn slope_of_power_law() {
        let xy: Vec<(f64, f64)> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 / x.sqrt()))
            .collect();
        assert!((log_log_slope(&xy).unwrap() + 0.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn coverage_monotone_in_k(
            pts in prop::collection::vec((1u64..500, 0.0f64..50.0), 1..50),
            k1 in 0.0f64..4.0, dk in 0.0f64..4.0,
        ) {
            let a = coverage(&pts, 10.0, 8.0, k1).unwrap();
            let b = coverage(&pts, 10.0, 8.0, k1 + dk).unwrap();
            prop_assert!(b >= a);
        }
    }
}
