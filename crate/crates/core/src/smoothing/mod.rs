//! Exponential smoothing family: simple, Holt's linear trend, damped
//! trend, and additive Holt-Winters.
//!
//! Recursions (additive throughout):
//!
//! ```text
//! simple:        l_t = α·y_t + (1−α)·l_{t−1}
//! Holt level:    l_t = α·y_t + (1−α)·(l_{t−1} + b_{t−1})
//! Holt trend:    b_t = β·(l_t − l_{t−1}) + (1−β)·b_{t−1}
//! HW level:      l_t = α·(y_t − s_{t−m}) + (1−α)·(l_{t−1} + b_{t−1})
//! HW seasonal:   s_t = γ·(y_t − l_{t−1} − b_{t−1}) + (1−γ)·s_{t−m}
//! ```
//!
//! The damped variant replaces `b_{t−1}` with `φ·b_{t−1}` in both the
//! level and trend updates, and the forecast horizon `h` with the
//! geometric sum `φ + φ² + … + φ^h`.
//!
//! State is initialized heuristically (simple: l₀ = y₀; trend: b₀ =
//! y₁ − y₀; Holt-Winters: level = mean of the first season, trend =
//! season-mean difference / m, seasonals = first-season deviations) and
//! then every observation is absorbed in order: the one-step-ahead
//! fitted value is recorded before each update, so the first fitted
//! values carry the initialization error.

mod fit;

pub use fit::{fit, EsFit};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EsError {
    #[error("{variant} needs at least {needed} observations, got {got}")]
    TooShort { variant: &'static str, needed: usize, got: usize },
    #[error("season length must be at least 2, got {0}")]
    BadSeasonLength(usize),
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    ParamRange { name: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("variant {variant} requires parameter {name}")]
    MissingParam { variant: &'static str, name: &'static str },
}

/// Which smoothing recursion to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum EsSpec {
    Simple,
    Holt,
    DampedHolt,
    HoltWinters { m: usize },
}

impl EsSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EsSpec::Simple => "simple",
            EsSpec::Holt => "holt",
            EsSpec::DampedHolt => "damped_holt",
            EsSpec::HoltWinters { .. } => "holt_winters",
        }
    }

    fn min_len(&self) -> usize {
        match self {
            EsSpec::Simple => 2,
            EsSpec::Holt | EsSpec::DampedHolt => 2,
            EsSpec::HoltWinters { m } => 2 * m,
        }
    }

    pub fn validate(&self) -> Result<(), EsError> {
        if let EsSpec::HoltWinters { m } = self {
            if *m < 2 {
                return Err(EsError::BadSeasonLength(*m));
            }
        }
        Ok(())
    }
}

/// Smoothing parameters. Only the fields the variant uses are read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EsParams {
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<f64>,
    /// Trend damping, strictly inside (0, 1); stored clamped to
    /// [0.01, 0.99].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub damping: Option<f64>,
}

impl EsParams {
    pub fn simple(alpha: f64) -> Self {
        EsParams { alpha, beta: None, gamma: None, damping: None }
    }

    pub fn holt(alpha: f64, beta: f64) -> Self {
        EsParams { alpha, beta: Some(beta), gamma: None, damping: None }
    }

    pub fn damped_holt(alpha: f64, beta: f64, damping: f64) -> Self {
        EsParams { alpha, beta: Some(beta), gamma: None, damping: Some(damping) }
    }

    pub fn holt_winters(alpha: f64, beta: f64, gamma: f64) -> Self {
        EsParams { alpha, beta: Some(beta), gamma: Some(gamma), damping: None }
    }

    fn in_unit(name: &'static str, v: f64) -> Result<f64, EsError> {
        if !(0.0..=1.0).contains(&v) || !v.is_finite() {
            return Err(EsError::ParamRange { name, value: v, lo: 0.0, hi: 1.0 });
        }
        Ok(v)
    }

    fn require(spec: &EsSpec, name: &'static str, v: Option<f64>) -> Result<f64, EsError> {
        v.ok_or(EsError::MissingParam { variant: spec.name(), name })
    }

    pub fn validate(&self, spec: &EsSpec) -> Result<(), EsError> {
        spec.validate()?;
        Self::in_unit("alpha", self.alpha)?;
        match spec {
            EsSpec::Simple => {}
            EsSpec::Holt => {
                Self::in_unit("beta", Self::require(spec, "beta", self.beta)?)?;
            }
            EsSpec::DampedHolt => {
                Self::in_unit("beta", Self::require(spec, "beta", self.beta)?)?;
                let phi = Self::require(spec, "damping", self.damping)?;
                if !(phi > 0.0 && phi < 1.0) {
                    return Err(EsError::ParamRange { name: "damping", value: phi, lo: 0.0, hi: 1.0 });
                }
            }
            EsSpec::HoltWinters { .. } => {
                Self::in_unit("beta", Self::require(spec, "beta", self.beta)?)?;
                Self::in_unit("gamma", Self::require(spec, "gamma", self.gamma)?)?;
            }
        }
        Ok(())
    }
}

/// Terminal smoothing state: level, optional trend, optional seasonal
/// ring (slot i holds the latest estimate for time indices ≡ i mod m),
/// and the index of the last absorbed observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsState {
    pub level: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trend: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seasonal: Option<Vec<f64>>,
    pub t: usize,
}

/// Outcome of running a smoothing recursion over a series.
#[derive(Debug, Clone, PartialEq)]
pub struct Smoothed {
    pub state: EsState,
    /// One-step-ahead fitted value for every observation.
    pub fitted: Vec<f64>,
    pub sse: f64,
}

/// Run the variant's recursion over `y`, recording one-step-ahead fitted
/// values and the sum of squared one-step errors.
pub fn smooth(spec: &EsSpec, params: &EsParams, y: &TimeSeries) -> Result<Smoothed, EsError> {
    params.validate(spec)?;
    let v = y.values();
    if v.len() < spec.min_len() {
        return Err(EsError::TooShort {
            variant: spec.name(),
            needed: spec.min_len(),
            got: v.len(),
        });
    }

    match spec {
        EsSpec::Simple => {
            let alpha = params.alpha;
            let mut level = v[0];
            let mut fitted = Vec::with_capacity(v.len());
            let mut sse = 0.0;
            for &obs in v {
                fitted.push(level);
                let e = level - obs;
                sse += e * e;
                level = alpha * obs + (1.0 - alpha) * level;
            }
            Ok(Smoothed {
                state: EsState { level, trend: None, seasonal: None, t: v.len() - 1 },
                fitted,
                sse,
            })
        }
        EsSpec::Holt | EsSpec::DampedHolt => {
            let alpha = params.alpha;
            let beta = params.beta.expect("validated");
            let phi = if matches!(spec, EsSpec::DampedHolt) {
                params.damping.expect("validated")
            } else {
                1.0
            };
            let mut level = v[0];
            let mut trend = v[1] - v[0];
            let mut fitted = Vec::with_capacity(v.len());
            let mut sse = 0.0;
            for &obs in v {
                let damped_trend = phi * trend;
                let one_step = level + damped_trend;
                fitted.push(one_step);
                let e = one_step - obs;
                sse += e * e;
                let new_level = alpha * obs + (1.0 - alpha) * (level + damped_trend);
                trend = beta * (new_level - level) + (1.0 - beta) * damped_trend;
                level = new_level;
            }
            Ok(Smoothed {
                state: EsState { level, trend: Some(trend), seasonal: None, t: v.len() - 1 },
                fitted,
                sse,
            })
        }
        EsSpec::HoltWinters { m } => {
            let m = *m;
            let alpha = params.alpha;
            let beta = params.beta.expect("validated");
            let gamma = params.gamma.expect("validated");
            let s1_mean = v[..m].iter().sum::<f64>() / m as f64;
            let s2_mean = v[m..2 * m].iter().sum::<f64>() / m as f64;
            let mut level = s1_mean;
            let mut trend = (s2_mean - s1_mean) / m as f64;
            let mut ring: Vec<f64> = v[..m].iter().map(|&obs| obs - s1_mean).collect();

            let mut fitted = Vec::with_capacity(v.len());
            let mut sse = 0.0;
            for (t, &obs) in v.iter().enumerate() {
                let slot = t % m;
                let one_step = level + trend + ring[slot];
                fitted.push(one_step);
                let e = one_step - obs;
                sse += e * e;
                let s_prev = ring[slot];
                let new_level = alpha * (obs - s_prev) + (1.0 - alpha) * (level + trend);
                let new_trend = beta * (new_level - level) + (1.0 - beta) * trend;
                ring[slot] = gamma * (obs - level - trend) + (1.0 - gamma) * s_prev;
                level = new_level;
                trend = new_trend;
            }
            Ok(Smoothed {
                state: EsState { level, trend: Some(trend), seasonal: Some(ring), t: v.len() - 1 },
                fitted,
                sse,
            })
        }
    }
}

/// Forecast steps 1..=h from a terminal state.
pub fn forecast(spec: &EsSpec, params: &EsParams, state: &EsState, h: usize) -> Vec<f64> {
    match spec {
        EsSpec::Simple => vec![state.level; h],
        EsSpec::Holt => {
            let b = state.trend.unwrap_or(0.0);
            (1..=h).map(|k| state.level + k as f64 * b).collect()
        }
        EsSpec::DampedHolt => {
            let b = state.trend.unwrap_or(0.0);
            let phi = params.damping.unwrap_or(1.0);
            let mut geom = 0.0;
            let mut pow = 1.0;
            (1..=h)
                .map(|_| {
                    pow *= phi;
                    geom += pow;
                    state.level + geom * b
                })
                .collect()
        }
        EsSpec::HoltWinters { m } => {
            let b = state.trend.unwrap_or(0.0);
            let ring = state.seasonal.as_deref().unwrap_or(&[]);
            (1..=h)
                .map(|k| {
                    let seasonal = if ring.is_empty() { 0.0 } else { ring[(state.t + k) % m] };
                    state.level + k as f64 * b + seasonal
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec())
    }

    #[test]
    fn simple_alpha_one_tracks_last_observation() {
        let out = smooth(&EsSpec::Simple, &EsParams::simple(1.0), &series(&[2.0, 4.0, 7.0])).unwrap();
        assert_eq!(out.fitted, vec![2.0, 2.0, 4.0]);
        assert_eq!(out.state.level, 7.0);
    }

    #[test]
    fn simple_alpha_zero_freezes_level() {
        let out = smooth(&EsSpec::Simple, &EsParams::simple(0.0), &series(&[2.0, 4.0, 7.0])).unwrap();
        assert_eq!(out.state.level, 2.0);
        assert_eq!(out.fitted, vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn simple_half_alpha_hand_case() {
        let out = smooth(&EsSpec::Simple, &EsParams::simple(0.5), &series(&[2.0, 4.0])).unwrap();
        assert_eq!(out.state.level, 3.0);
    }

    #[test]
    fn simple_forecast_is_flat() {
        let state = EsState { level: 5.0, trend: None, seasonal: None, t: 9 };
        assert_eq!(forecast(&EsSpec::Simple, &EsParams::simple(0.3), &state, 3), vec![5.0; 3]);
    }

    #[test]
    fn holt_forecast_extends_trend() {
        let state = EsState { level: 10.0, trend: Some(2.0), seasonal: None, t: 9 };
        assert_eq!(
            forecast(&EsSpec::Holt, &EsParams::holt(0.5, 0.5), &state, 3),
            vec![12.0, 14.0, 16.0]
        );
    }

    #[test]
    fn damped_forecast_hand_case() {
        let state = EsState { level: 10.0, trend: Some(2.0), seasonal: None, t: 9 };
        let fc = forecast(&EsSpec::DampedHolt, &EsParams::damped_holt(0.5, 0.5, 0.5), &state, 3);
        assert_eq!(fc, vec![11.0, 11.5, 11.75]);
    }

    #[test]
    fn damped_forecast_converges_to_geometric_limit() {
        let (l, b, phi) = (10.0, 2.0, 0.8);
        let state = EsState { level: l, trend: Some(b), seasonal: None, t: 0 };
        let fc = forecast(&EsSpec::DampedHolt, &EsParams::damped_holt(0.5, 0.5, phi), &state, 200);
        let limit = l + b * phi / (1.0 - phi);
        assert!((fc[199] - limit).abs() < 1e-6, "got {} want {}", fc[199], limit);
    }

    #[test]
    fn damping_near_one_approaches_plain_holt() {
        let state = EsState { level: 10.0, trend: Some(2.0), seasonal: None, t: 0 };
        let holt = forecast(&EsSpec::Holt, &EsParams::holt(0.5, 0.5), &state, 3);
        let mut prev_gap = f64::INFINITY;
        for phi in [0.9, 0.95, 0.99] {
            let damped =
                forecast(&EsSpec::DampedHolt, &EsParams::damped_holt(0.5, 0.5, phi), &state, 3);
            let gap = (damped[2] - holt[2]).abs();
            assert!(gap < prev_gap, "gap should shrink as damping → 1");
            prev_gap = gap;
        }
    }

    #[test]
    fn hw_seasonal_index_stays_in_ring() {
        for m in [2usize, 4, 12] {
            let ring: Vec<f64> = (0..m).map(|i| i as f64).collect();
            let state = EsState { level: 0.0, trend: Some(0.0), seasonal: Some(ring), t: 3 * m - 1 };
            let spec = EsSpec::HoltWinters { m };
            let fc = forecast(&spec, &EsParams::holt_winters(0.5, 0.5, 0.5), &state, 3 * m);
            // seasonal contribution must cycle with period m
            for (k, v) in fc.iter().enumerate() {
                let slot = (state.t + k + 1) % m;
                assert_eq!(*v, slot as f64);
            }
        }
    }

    #[test]
    fn hw_one_step_uses_next_slot() {
        let state = EsState {
            level: 100.0,
            trend: Some(1.0),
            seasonal: Some(vec![10.0, 20.0, 30.0, 40.0]),
            t: 7, // slots filled through index 7; next index 8 → slot 0
        };
        let spec = EsSpec::HoltWinters { m: 4 };
        let fc = forecast(&spec, &EsParams::holt_winters(0.5, 0.5, 0.5), &state, 1);
        assert_eq!(fc, vec![100.0 + 1.0 + 10.0]);
    }

    #[test]
    fn too_short_inputs_rejected() {
        assert!(matches!(
            smooth(&EsSpec::Simple, &EsParams::simple(0.5), &series(&[1.0])),
            Err(EsError::TooShort { .. })
        ));
        let hw = EsSpec::HoltWinters { m: 4 };
        assert!(matches!(
            smooth(&hw, &EsParams::holt_winters(0.5, 0.5, 0.5), &series(&[1.0; 7])),
            Err(EsError::TooShort { needed: 8, .. })
        ));
    }

    #[test]
    fn param_validation() {
        assert!(matches!(
            smooth(&EsSpec::Simple, &EsParams::simple(1.5), &series(&[1.0, 2.0])),
            Err(EsError::ParamRange { name: "alpha", .. })
        ));
        assert!(matches!(
            smooth(&EsSpec::Holt, &EsParams::simple(0.5), &series(&[1.0, 2.0])),
            Err(EsError::MissingParam { name: "beta", .. })
        ));
        assert!(matches!(
            smooth(&EsSpec::DampedHolt, &EsParams::damped_holt(0.5, 0.5, 1.0), &series(&[1.0, 2.0])),
            Err(EsError::ParamRange { name: "damping", .. })
        ));
        assert!(EsSpec::HoltWinters { m: 1 }.validate().is_err());
    }

    #[test]
    fn state_serialization_round_trips() {
        let state = EsState {
            level: 0.1 + 0.2,
            trend: Some(-1.0 / 3.0),
            seasonal: Some(vec![1e-300, 2.5]),
            t: 11,
        };
        let json = serde_json::to_string(&state).unwrap();
        let back: EsState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, state);
    }
}
