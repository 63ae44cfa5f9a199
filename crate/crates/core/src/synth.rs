//! Deterministic synthetic series generators for fixtures and benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::series::TimeSeries;

/// `offset + amplitude·sin(2π·t/period + phase)` for t = 0..n.
pub fn sine(n: usize, period: f64, amplitude: f64, phase: f64, offset: f64) -> TimeSeries {
    let values = (0..n)
        .map(|t| offset + amplitude * (2.0 * std::f64::consts::PI * t as f64 / period + phase).sin())
        .collect();
    TimeSeries::new(values)
}

/// `intercept + slope·t` for t = 0..n.
pub fn line(n: usize, intercept: f64, slope: f64) -> TimeSeries {
    TimeSeries::new((0..n).map(|t| intercept + slope * t as f64).collect())
}

/// Linear trend plus a repeating additive seasonal pattern:
/// `base + slope·t + pattern[t mod pattern.len()]`.
pub fn trend_season(n: usize, base: f64, slope: f64, pattern: &[f64]) -> TimeSeries {
    assert!(!pattern.is_empty(), "seasonal pattern must be non-empty");
    let values = (0..n)
        .map(|t| base + slope * t as f64 + pattern[t % pattern.len()])
        .collect();
    TimeSeries::new(values)
}

/// Gaussian white noise, seeded. `sigma = 0` gives the all-zero series.
pub fn white_noise(n: usize, sigma: f64, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if sigma == 0.0 {
        return TimeSeries::new(vec![0.0; n]);
    }
    let normal = Normal::new(0.0, sigma).expect("sigma must be non-negative and finite");
    TimeSeries::new((0..n).map(|_| normal.sample(&mut rng)).collect())
}
