//! Stacked LSTM forecaster: cell mechanics, windowed training with full
//! backpropagation through time, finite-difference gradient checking,
//! recursive multi-step forecasting, and lookback selection.

mod cell;
mod model;
mod select;
mod train;
mod window;

pub use cell::{cell_step, functional_unit, GateTrace, LstmCellParams, LstmState, StepTrace};
pub use model::{ForwardTrace, LstmForecaster};
pub use select::{elbow_choice, select_lookback, LookbackSelection, ELBOW_TOL};
pub use train::{gradient_check, TrainConfig};
pub use window::{make_windows, Window};

use thiserror::Error;

use crate::numerics::ShapeError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LstmError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("window length {got} does not match lookback {expected}")]
    WindowLength { expected: usize, got: usize },
    #[error("window is empty")]
    EmptyWindow,
    #[error("series needs at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("constant series cannot be min-max scaled (every value is {value})")]
    ConstantSeries { value: f64 },
    #[error("invalid training config: {0}")]
    BadConfig(String),
    #[error("training diverged: non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("lookback candidates must be non-empty and strictly ascending")]
    BadCandidates,
    #[error("gradient-check epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("model is structurally invalid: {0}")]
    BadModel(String),
}
