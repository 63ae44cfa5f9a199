//! From-scratch time-series forecasting toolkit.
//!
//! Three model families behind one small API:
//!
//! - [`lstm`] — stacked LSTM layers with a ReLU output head, trained by
//!   backpropagation through time on sliding windows, with a
//!   finite-difference gradient checker, recursive multi-step
//!   forecasting, and elbow-rule lookback selection.
//! - [`arima`] — non-seasonal ARIMA(p,d,q): differencing/integration,
//!   conditional-sum-of-squares estimation, forecasting, and a seeded
//!   process simulator.
//! - [`smoothing`] — simple exponential smoothing, Holt's linear trend,
//!   damped trend, and additive Holt-Winters, with SSE-minimizing
//!   parameter fitting.
//!
//! Shared foundations: [`numerics`] (dense kernels), [`series`]
//! (the `TimeSeries` type), [`metrics`] (RMSE / MAE / bias and
//! chronological splits), [`optim`] (Nelder-Mead), and [`synth`]
//! (deterministic fixture generators).
//!
//! Everything is `f64`, deterministic given a seed, and serializable to
//! plain JSON where a model needs to leave the process.

pub mod arima;
pub mod lstm;
pub mod metrics;
pub mod numerics;
pub mod optim;
pub mod series;
pub mod smoothing;
pub mod synth;

pub use metrics::EvalReport;
pub use series::TimeSeries;
