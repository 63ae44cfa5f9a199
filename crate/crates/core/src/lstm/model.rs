//! The stacked forecaster: LSTM layers feeding a scalar ReLU head,
//! with min-max scaling metadata and the lookback window size.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cell::{cell_step_traced, LstmCellParams, LstmState, StepTrace};
use super::LstmError;
use crate::numerics::{relu, Vector};
use crate::series::TimeSeries;

/// Stacked LSTM layers plus a scalar output head `relu(w·h_last + b)`.
///
/// Predictions live in min-max-normalized space; `scale_min`/`scale_max`
/// are learned from the training series and used to map back to
/// original units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmForecaster {
    pub layers: Vec<LstmCellParams>,
    pub head_w: Vector,
    pub head_b: f64,
    pub lookback: usize,
    pub scale_min: f64,
    pub scale_max: f64,
}

/// Forward-pass bookkeeping: per-layer, per-step traces plus the head
/// pre-activation — everything backpropagation needs.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    /// `steps[layer][t]`
    pub steps: Vec<Vec<StepTrace>>,
    pub head_pre: f64,
    pub prediction: f64,
}

impl LstmForecaster {
    /// Fresh univariate forecaster. Weights are sampled uniformly from
    /// [−1/√m, +1/√m] per layer in declaration order (w_f, w_m, w_c,
    /// w_o row-major, then the head) from a ChaCha stream, so identical
    /// seeds give identical models. Gate biases start at zero except
    /// the forget bias at +1 (the cell should begin by remembering);
    /// the head bias starts at 0.5, the midpoint of the scaled target
    /// range, so the ReLU head is active from the first update.
    pub fn new(hidden_sizes: &[usize], lookback: usize, seed: u64) -> Result<Self, LstmError> {
        if hidden_sizes.is_empty() {
            return Err(LstmError::BadModel("at least one LSTM layer is required".into()));
        }
        if hidden_sizes.iter().any(|&m| m == 0) {
            return Err(LstmError::BadModel("hidden sizes must be positive".into()));
        }
        if lookback == 0 {
            return Err(LstmError::BadConfig("lookback must be at least 1".into()));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::with_capacity(hidden_sizes.len());
        let mut input_size = 1;
        for &m in hidden_sizes {
            let bound = 1.0 / (m as f64).sqrt();
            let mut p = LstmCellParams::zeros(m, input_size);
            for w in [&mut p.w_f, &mut p.w_m, &mut p.w_c, &mut p.w_o] {
                for v in &mut w.data {
                    *v = rng.random_range(-bound..bound);
                }
            }
            for b in &mut p.b_f.0 {
                *b = 1.0;
            }
            layers.push(p);
            input_size = m;
        }
        let last = *hidden_sizes.last().expect("non-empty");
        let bound = 1.0 / (last as f64).sqrt();
        let head_w = Vector((0..last).map(|_| rng.random_range(-bound..bound)).collect());

        Ok(LstmForecaster {
            layers,
            head_w,
            head_b: 0.5,
            lookback,
            scale_min: 0.0,
            scale_max: 1.0,
        })
    }

    pub fn validate(&self) -> Result<(), LstmError> {
        if self.layers.is_empty() {
            return Err(LstmError::BadModel("no layers".into()));
        }
        let mut input_size = self.layers[0].input_size;
        for (i, layer) in self.layers.iter().enumerate() {
            layer.validate()?;
            if layer.input_size != input_size {
                return Err(LstmError::BadModel(format!(
                    "layer {i} expects input size {}, previous layer provides {input_size}",
                    layer.input_size
                )));
            }
            input_size = layer.hidden_size;
        }
        if self.head_w.len() != input_size {
            return Err(LstmError::BadModel(format!(
                "head has {} weights but the last layer outputs {input_size}",
                self.head_w.len()
            )));
        }
        if self.lookback == 0 {
            return Err(LstmError::BadModel("lookback must be at least 1".into()));
        }
        if !(self.scale_max > self.scale_min) {
            return Err(LstmError::BadModel(format!(
                "scale bounds ({}, {}) are not increasing",
                self.scale_min, self.scale_max
            )));
        }
        Ok(())
    }

    pub fn normalize(&self, v: f64) -> f64 {
        (v - self.scale_min) / (self.scale_max - self.scale_min)
    }

    pub fn denormalize(&self, v: f64) -> f64 {
        v * (self.scale_max - self.scale_min) + self.scale_min
    }

    /// Run the whole window through every layer (states start at zero)
    /// and the ReLU head. The prediction is in normalized space.
    pub fn forward_sequence(&self, window: &[Vector]) -> Result<(f64, ForwardTrace), LstmError> {
        if window.is_empty() {
            return Err(LstmError::EmptyWindow);
        }
        if window.len() != self.lookback {
            return Err(LstmError::WindowLength { expected: self.lookback, got: window.len() });
        }

        let mut traces: Vec<Vec<StepTrace>> = Vec::with_capacity(self.layers.len());
        let mut inputs: Vec<Vector> = window.to_vec();
        for layer in &self.layers {
            let mut state = LstmState::zeros(layer.hidden_size);
            let mut layer_trace = Vec::with_capacity(inputs.len());
            let mut outputs = Vec::with_capacity(inputs.len());
            for x in &inputs {
                let step = cell_step_traced(layer, &state, x)?;
                state = LstmState { c: step.c.clone(), h: step.h.clone() };
                outputs.push(step.h.clone());
                layer_trace.push(step);
            }
            traces.push(layer_trace);
            inputs = outputs;
        }

        let h_last = inputs.last().expect("window is non-empty");
        if h_last.len() != self.head_w.len() {
            return Err(LstmError::BadModel(format!(
                "head has {} weights but the last layer outputs {}",
                self.head_w.len(),
                h_last.len()
            )));
        }
        let head_pre = self.head_w.dot(h_last) + self.head_b;
        let prediction = relu(head_pre);
        Ok((prediction, ForwardTrace { steps: traces, head_pre, prediction }))
    }

    /// One-step prediction without keeping traces around.
    pub fn predict(&self, window: &[Vector]) -> Result<f64, LstmError> {
        Ok(self.forward_sequence(window)?.0)
    }

    /// Forecast `horizon` steps by feeding each prediction back into the
    /// window. Inputs are normalized with the trained scale bounds and
    /// outputs are returned in original units.
    pub fn recursive_forecast(
        &self,
        history: &TimeSeries,
        horizon: usize,
    ) -> Result<Vec<f64>, LstmError> {
        if history.len() < self.lookback {
            return Err(LstmError::TooShort { needed: self.lookback, got: history.len() });
        }
        let mut values = history.values().to_vec();
        let mut out = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            let window: Vec<Vector> = values[values.len() - self.lookback..]
                .iter()
                .map(|&v| Vector(vec![self.normalize(v)]))
                .collect();
            let pred = self.predict(&window)?;
            let original = self.denormalize(pred);
            out.push(original);
            values.push(original);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self, LstmError> {
        let model: LstmForecaster = serde_json::from_str(json)
            .map_err(|e| LstmError::BadModel(format!("unparseable model JSON: {e}")))?;
        model.validate()?;
        Ok(model)
    }
}
