//! ARIMA process simulator — the generative inverse of the fit, used as
//! its test oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::css::arma_step;
use super::diff::integrate;
use super::{ArimaError, ArimaOrder};
use crate::series::TimeSeries;

/// Draw a length-`n` series from the process defined by
/// (order, c, φ, θ) with shocks ε ~ Normal(0, σ²) from a seeded
/// generator. The differenced recursion starts from zero presample
/// values and is integrated d times from zero initials, so the output is
/// deterministic per seed.
pub fn simulate(
    order: &ArimaOrder,
    c: f64,
    phi: &[f64],
    theta: &[f64],
    n: usize,
    sigma: f64,
    seed: u64,
) -> Result<TimeSeries, ArimaError> {
    if n == 0 {
        return Err(ArimaError::BadSimulation("n must be at least 1".into()));
    }
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(ArimaError::BadSimulation(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    if phi.len() != order.p {
        return Err(ArimaError::OrderMismatch { which: "AR", expected: order.p, got: phi.len() });
    }
    if theta.len() != order.q {
        return Err(ArimaError::OrderMismatch { which: "MA", expected: order.q, got: theta.len() });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = n.saturating_sub(order.d);
    let mut shocks = vec![0.0; steps];
    if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).expect("validated above");
        for s in &mut shocks {
            *s = normal.sample(&mut rng);
        }
    }

    let mut diffed = Vec::with_capacity(steps);
    for (t, &shock) in shocks.iter().enumerate() {
        let v = arma_step(c, phi, theta, &diffed, &shocks, t) + shock;
        diffed.push(v);
    }

    let initials = vec![0.0; order.d];
    let mut values = integrate(&diffed, &initials, order.d)?;
    values.truncate(n);
    Ok(TimeSeries::new(values))
}
