//! Non-seasonal ARIMA(p,d,q).
//!
//! The differenced series follows
//!
//! ```text
//! y'_t = c + φ₁y'_{t-1} + … + φ_p y'_{t-p} + θ₁ε_{t-1} + … + θ_q ε_{t-q} + ε_t
//! ```
//!
//! Estimation minimizes the conditional sum of squares: residuals are
//! computed recursively from t = p with presample errors set to zero.
//! The pure-AR case (q = 0) is solved exactly by least squares; anything
//! with an MA component goes through Nelder-Mead from the AR start.
//!
//! `c` is the intercept of the differenced-space recursion; for d = 1 it
//! reads as the mean per-period change (long-term drift).

mod css;
mod diff;
mod sim;

pub use css::css_objective;
pub use diff::{difference, integrate};
pub use sim::simulate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArimaError {
    #[error("order (0,0,0) is not a model")]
    TrivialOrder,
    #[error("coefficient count mismatch: expected {expected} {which} coefficients, got {got}")]
    OrderMismatch { which: &'static str, expected: usize, got: usize },
    #[error("series needs at least {needed} observations for this order, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("cannot difference a series of length {len} {d} times")]
    CannotDifference { len: usize, d: usize },
    #[error("integration initials malformed: expected {expected} leading values, got {got}")]
    BadInitials { expected: usize, got: usize },
    #[error("least-squares system is singular (series may be degenerate)")]
    Singular,
    #[error("invalid simulation request: {0}")]
    BadSimulation(String),
}

/// Model orders: AR lags `p`, differencing degree `d`, MA lags `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Result<Self, ArimaError> {
        if p + q == 0 && d == 0 {
            return Err(ArimaError::TrivialOrder);
        }
        Ok(ArimaOrder { p, d, q })
    }

    /// Minimum series length accepted by `ArimaModel::fit`.
    pub fn adequacy_floor(&self) -> usize {
        10 * (self.p + self.q + 1) + self.d
    }
}

impl std::fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ARIMA({},{},{})", self.p, self.d, self.q)
    }
}

/// A fitted ARIMA model together with the training state needed to
/// forecast: the differenced history, in-sample residuals, and the
/// leading values consumed by differencing.
#[derive(Debug, Clone, PartialEq)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    /// Intercept of the differenced-space recursion.
    pub c: f64,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    /// In-sample residuals aligned with `diffed`; the first p entries are
    /// presample zeros.
    pub residuals: Vec<f64>,
    /// The d leading values consumed by differencing (one per level),
    /// needed to invert back to original units.
    pub initials: Vec<f64>,
    /// Differenced training history.
    pub diffed: Vec<f64>,
    /// False when the optimizer hit its iteration budget; the best point
    /// found is still returned.
    pub converged: bool,
    pub warnings: Vec<String>,
}

impl ArimaModel {
    /// Estimate (c, φ, θ) on `y` by conditional sum of squares.
    pub fn fit(y: &TimeSeries, order: ArimaOrder) -> Result<Self, ArimaError> {
        css::fit(y.values(), order)
    }

    /// Same parameters, re-conditioned on a different history: residuals
    /// and differencing state are recomputed for `y`.
    pub fn conditioned_on(&self, y: &TimeSeries) -> Result<Self, ArimaError> {
        let (diffed, initials) = difference(y.values(), self.order.d)?;
        let (residuals, _) = css::css_residuals(self.c, &self.phi, &self.theta, &diffed);
        Ok(ArimaModel {
            order: self.order,
            c: self.c,
            phi: self.phi.clone(),
            theta: self.theta.clone(),
            residuals,
            initials,
            diffed,
            converged: self.converged,
            warnings: self.warnings.clone(),
        })
    }

    /// h-step forecast in original units. Future shocks are set to their
    /// expectation (zero); predicted differenced values are fed back as
    /// AR lags, then integrated d times.
    pub fn forecast(&self, h: usize) -> Vec<f64> {
        let mut hist = self.diffed.clone();
        let mut errs = self.residuals.clone();
        let base = hist.len();
        for _ in 0..h {
            let t = hist.len();
            let v = css::arma_step(self.c, &self.phi, &self.theta, &hist, &errs, t);
            hist.push(v);
            errs.push(0.0);
        }
        let future = &hist[base..];

        // Last value at every differencing level, then cascade upward.
        let mut tails = vec![0.0; self.order.d];
        let mut level = self.diffed.clone();
        for k in (0..self.order.d).rev() {
            level = integrate(&level, &self.initials[k..=k], 1).expect("initials are per-level");
            tails[k] = *level.last().expect("integration never yields an empty series");
        }

        future
            .iter()
            .map(|&v| {
                let mut acc = v;
                for tail in tails.iter_mut().rev() {
                    acc += *tail;
                    *tail = acc;
                }
                acc
            })
            .collect()
    }
}

/// One step of the combined recursion:
/// `ŷ'_t = c + Σ φ_j·y'_{t-j} + Σ θ_j·ε_{t-j}`, with unavailable lags
/// treated as zero (conditional convention).
pub fn arma_one_step(model: &ArimaModel, history: &[f64], errors: &[f64], t: usize) -> f64 {
    css::arma_step(model.c, &model.phi, &model.theta, history, errors, t)
}

/// The serialized form: parameters only. Residuals are omitted —
/// they are recomputable by re-conditioning on a history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaModelFile {
    pub order: ArimaOrder,
    pub c: f64,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub initials: Vec<f64>,
}

impl ArimaModelFile {
    pub fn from_model(model: &ArimaModel) -> Self {
        ArimaModelFile {
            order: model.order,
            c: model.c,
            phi: model.phi.clone(),
            theta: model.theta.clone(),
            initials: model.initials.clone(),
        }
    }

    /// Rebuild a forecast-ready model by conditioning the stored
    /// parameters on `y`.
    pub fn into_model(self, y: &TimeSeries) -> Result<ArimaModel, ArimaError> {
        if self.phi.len() != self.order.p {
            return Err(ArimaError::OrderMismatch {
                which: "AR",
                expected: self.order.p,
                got: self.phi.len(),
            });
        }
        if self.theta.len() != self.order.q {
            return Err(ArimaError::OrderMismatch {
                which: "MA",
                expected: self.order.q,
                got: self.theta.len(),
            });
        }
        let template = ArimaModel {
            order: self.order,
            c: self.c,
            phi: self.phi,
            theta: self.theta,
            residuals: Vec::new(),
            initials: Vec::new(),
            diffed: Vec::new(),
            converged: true,
            warnings: Vec::new(),
        };
        template.conditioned_on(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bare_model(order: ArimaOrder, c: f64, phi: Vec<f64>, theta: Vec<f64>) -> ArimaModel {
        ArimaModel {
            order,
            c,
            phi,
            theta,
            residuals: Vec::new(),
            initials: Vec::new(),
            diffed: Vec::new(),
            converged: true,
            warnings: Vec::new(),
        }
    }

    #[test]
    fn trivial_order_rejected() {
        assert!(matches!(ArimaOrder::new(0, 0, 0), Err(ArimaError::TrivialOrder)));
        assert!(ArimaOrder::new(0, 1, 0).is_ok());
    }

    #[test]
    fn one_step_ar1() {
        let m = bare_model(ArimaOrder::new(1, 0, 0).unwrap(), 0.0, vec![0.5], vec![]);
        assert_eq!(arma_one_step(&m, &[4.0], &[0.0], 1), 2.0);
    }

    #[test]
    fn one_step_ma1() {
        let m = bare_model(ArimaOrder::new(0, 0, 1).unwrap(), 0.0, vec![], vec![0.5]);
        assert_eq!(arma_one_step(&m, &[0.0], &[0.2], 1), 0.1);
    }

    #[test]
    fn one_step_arma11_hand_case() {
        let m = bare_model(ArimaOrder::new(1, 0, 1).unwrap(), 1.0, vec![0.5], vec![-0.2]);
        // 1 + 0.5·2 − 0.2·0.5 = 1.9
        assert!((arma_one_step(&m, &[2.0], &[0.5], 1) - 1.9).abs() < 1e-12);
    }

    #[test]
    fn one_step_treats_missing_lags_as_zero() {
        let m = bare_model(ArimaOrder::new(2, 0, 0).unwrap(), 0.5, vec![0.5, 0.25], vec![]);
        assert_eq!(arma_one_step(&m, &[], &[], 0), 0.5);
        assert_eq!(arma_one_step(&m, &[2.0], &[0.0], 1), 0.5 + 1.0);
    }

    #[test]
    fn forecast_ma1_memory_dies_after_q_steps() {
        let mut m = bare_model(ArimaOrder::new(0, 0, 1).unwrap(), 0.0, vec![], vec![0.5]);
        m.diffed = vec![0.0];
        m.residuals = vec![0.2];
        assert_eq!(m.forecast(3), vec![0.1, 0.0, 0.0]);
    }

    #[test]
    fn pure_ma_forecast_settles_to_drift_after_q_steps() {
        let mut m = bare_model(ArimaOrder::new(0, 0, 2).unwrap(), 1.5, vec![], vec![0.4, -0.3]);
        m.diffed = vec![0.0, 0.0];
        m.residuals = vec![0.25, -0.5];
        let fc = m.forecast(5);
        // steps 1..q still see stored residuals; beyond q only c remains
        assert!((fc[0] - (1.5 + 0.4 * -0.5 + -0.3 * 0.25)).abs() < 1e-12);
        for v in &fc[2..] {
            assert_eq!(*v, 1.5);
        }
    }

    #[test]
    fn forecast_ar1_decays_geometrically() {
        let mut m = bare_model(ArimaOrder::new(1, 0, 0).unwrap(), 0.0, vec![0.5], vec![]);
        m.diffed = vec![4.0];
        m.residuals = vec![0.0];
        assert_eq!(m.forecast(3), vec![2.0, 1.0, 0.5]);
    }

    #[test]
    fn forecast_drift_model_walks() {
        let mut m = bare_model(ArimaOrder::new(0, 1, 0).unwrap(), 2.0, vec![], vec![]);
        m.diffed = vec![2.0, 2.0];
        m.residuals = vec![0.0, 0.0];
        m.initials = vec![6.0]; // original series [6, 8, 10]
        assert_eq!(m.forecast(3), vec![12.0, 14.0, 16.0]);
    }

    #[test]
    fn model_file_round_trip_is_value_exact() {
        let m = bare_model(
            ArimaOrder::new(1, 0, 1).unwrap(),
            0.123456789012345678,
            vec![0.1 + 0.2],
            vec![-1.0 / 3.0],
        );
        let json = serde_json::to_string(&ArimaModelFile::from_model(&m)).unwrap();
        let back: ArimaModelFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.c, m.c);
        assert_eq!(back.phi, m.phi);
        assert_eq!(back.theta, m.theta);
    }
}
