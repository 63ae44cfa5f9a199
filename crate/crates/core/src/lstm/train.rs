//! Training: squared-error loss on the window prediction, full
//! backpropagation through time across all layers and steps, global
//! gradient-norm clipping, plain gradient descent. Also the
//! finite-difference gradient checker that validates the whole chain.

use super::cell::LstmCellParams;
use super::model::{ForwardTrace, LstmForecaster};
use super::window::windows_from_slice;
use super::LstmError;
use crate::numerics::{matvec_t_acc, Vector};
use crate::series::TimeSeries;

/// Gradient-descent settings. Training itself is deterministic; the
/// seed is used wherever a fresh model must be initialized on the
/// caller's behalf (lookback selection, the CLI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub clip_norm: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { epochs: 200, learning_rate: 0.05, clip_norm: 5.0, seed: 0 }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), LstmError> {
        if self.epochs == 0 {
            return Err(LstmError::BadConfig("epochs must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(LstmError::BadConfig(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if !(self.clip_norm > 0.0 && self.clip_norm.is_finite()) {
            return Err(LstmError::BadConfig(format!(
                "clip norm must be positive and finite, got {}",
                self.clip_norm
            )));
        }
        Ok(())
    }
}

/// Parameter-shaped gradient accumulator (layer tensors reuse the cell
/// parameter layout).
#[derive(Debug, Clone)]
pub(crate) struct LstmGradients {
    pub layers: Vec<LstmCellParams>,
    pub head_w: Vector,
    pub head_b: f64,
}

impl LstmGradients {
    fn zeros_like(model: &LstmForecaster) -> Self {
        LstmGradients {
            layers: model
                .layers
                .iter()
                .map(|l| LstmCellParams::zeros(l.hidden_size, l.input_size))
                .collect(),
            head_w: Vector::zeros(model.head_w.len()),
            head_b: 0.0,
        }
    }

    fn global_norm(&self) -> f64 {
        let mut sq = self.head_w.sq_norm() + self.head_b * self.head_b;
        for l in &self.layers {
            sq += l.w_f.sq_norm() + l.w_m.sq_norm() + l.w_c.sq_norm() + l.w_o.sq_norm();
            sq += l.b_f.sq_norm() + l.b_m.sq_norm() + l.b_c.sq_norm() + l.b_o.sq_norm();
        }
        sq.sqrt()
    }

    fn scale(&mut self, k: f64) {
        for l in &mut self.layers {
            for w in [&mut l.w_f, &mut l.w_m, &mut l.w_c, &mut l.w_o] {
                for v in &mut w.data {
                    *v *= k;
                }
            }
            for b in [&mut l.b_f, &mut l.b_m, &mut l.b_c, &mut l.b_o] {
                b.scale_in_place(k);
            }
        }
        self.head_w.scale_in_place(k);
        self.head_b *= k;
    }

    /// Flattened in canonical parameter order (matches `param_slot`).
    fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for l in &self.layers {
            out.extend_from_slice(&l.w_f.data);
            out.extend_from_slice(&l.w_m.data);
            out.extend_from_slice(&l.w_c.data);
            out.extend_from_slice(&l.w_o.data);
            out.extend_from_slice(l.b_f.as_slice());
            out.extend_from_slice(l.b_m.as_slice());
            out.extend_from_slice(l.b_c.as_slice());
            out.extend_from_slice(l.b_o.as_slice());
        }
        out.extend_from_slice(self.head_w.as_slice());
        out.push(self.head_b);
        out
    }
}

/// Squared error of one window and its gradient with respect to every
/// parameter, obtained by unrolling the chain rule backwards through
/// the head, all layers, and all time steps.
pub(crate) fn backward(
    model: &LstmForecaster,
    trace: &ForwardTrace,
    target: f64,
) -> (f64, LstmGradients) {
    let steps = trace.steps[0].len();
    let loss_err = trace.prediction - target;
    let loss = loss_err * loss_err;
    let mut grads = LstmGradients::zeros_like(model);

    // ReLU head: subgradient 0 at exactly zero pre-activation.
    let d_pre_head = if trace.head_pre > 0.0 { 2.0 * loss_err } else { 0.0 };
    let top = model.layers.len() - 1;
    let h_last = &trace.steps[top][steps - 1].h;
    grads.head_w.axpy(d_pre_head, h_last);
    grads.head_b = d_pre_head;

    // dL/dh arriving from the layer above (or the head), per layer per step
    let mut dh_above: Vec<Vec<Vector>> = model
        .layers
        .iter()
        .map(|l| vec![Vector::zeros(l.hidden_size); steps])
        .collect();
    dh_above[top][steps - 1].axpy(d_pre_head, &model.head_w);

    for li in (0..model.layers.len()).rev() {
        let layer = &model.layers[li];
        let m = layer.hidden_size;
        let mut dh_rec = Vector::zeros(m);
        let mut dc = Vector::zeros(m);

        for t in (0..steps).rev() {
            let step = &trace.steps[li][t];
            let g = &step.gates;

            // total gradient into h_t, then into o and c
            let mut dh = dh_above[li][t].clone();
            dh.axpy(1.0, &dh_rec);

            let mut d_pre = Vector::zeros(m); // reused per gate
            let mut dz = Vector::zeros(m + layer.input_size);

            // c_t receives dh through h = o·tanh(c), plus dc from t+1
            for i in 0..m {
                let th = step.tanh_c[i];
                dc[i] += dh[i] * g.o[i] * (1.0 - th * th);
            }

            // output gate: dL/d(pre_o) = dh·tanh(c)·o(1−o)
            for i in 0..m {
                d_pre[i] = dh[i] * step.tanh_c[i] * g.o[i] * (1.0 - g.o[i]);
            }
            grads.layers[li].w_o.add_outer(1.0, &d_pre, &step.z);
            grads.layers[li].b_o.axpy(1.0, &d_pre);
            matvec_t_acc(&layer.w_o, &d_pre, &mut dz);

            // magnitude gate: c += c̃·m
            for i in 0..m {
                d_pre[i] = dc[i] * g.c_tilde[i] * g.m_gate[i] * (1.0 - g.m_gate[i]);
            }
            grads.layers[li].w_m.add_outer(1.0, &d_pre, &step.z);
            grads.layers[li].b_m.axpy(1.0, &d_pre);
            matvec_t_acc(&layer.w_m, &d_pre, &mut dz);

            // change proposal: tanh unit
            for i in 0..m {
                let ct = g.c_tilde[i];
                d_pre[i] = dc[i] * g.m_gate[i] * (1.0 - ct * ct);
            }
            grads.layers[li].w_c.add_outer(1.0, &d_pre, &step.z);
            grads.layers[li].b_c.axpy(1.0, &d_pre);
            matvec_t_acc(&layer.w_c, &d_pre, &mut dz);

            // forget gate: c += c_prev·f
            for i in 0..m {
                d_pre[i] = dc[i] * step.c_prev[i] * g.f[i] * (1.0 - g.f[i]);
            }
            grads.layers[li].w_f.add_outer(1.0, &d_pre, &step.z);
            grads.layers[li].b_f.axpy(1.0, &d_pre);
            matvec_t_acc(&layer.w_f, &d_pre, &mut dz);

            // split dz into the recurrent part and the input part
            for i in 0..m {
                dh_rec[i] = dz[i];
            }
            if li > 0 {
                let below = &mut dh_above[li - 1][t];
                for j in 0..layer.input_size {
                    below[j] += dz[m + j];
                }
            }

            // cell gradient flowing to t−1 passes through the forget gate
            for i in 0..m {
                dc[i] *= g.f[i];
            }
        }
    }

    (loss, grads)
}

fn apply_update(model: &mut LstmForecaster, grads: &LstmGradients, step: f64) {
    for (layer, g) in model.layers.iter_mut().zip(&grads.layers) {
        layer.w_f.axpy(step, &g.w_f);
        layer.w_m.axpy(step, &g.w_m);
        layer.w_c.axpy(step, &g.w_c);
        layer.w_o.axpy(step, &g.w_o);
        layer.b_f.axpy(step, &g.b_f);
        layer.b_m.axpy(step, &g.b_m);
        layer.b_c.axpy(step, &g.b_c);
        layer.b_o.axpy(step, &g.b_o);
    }
    model.head_w.axpy(step, &grads.head_w);
    model.head_b += step * grads.head_b;
}

impl LstmForecaster {
    /// Train on `series`: min-max scale to [0, 1], slide windows, and for
    /// every window run a forward pass, backpropagate through time, clip
    /// the global gradient norm, and take a gradient-descent step.
    /// Returns the trained model and the per-epoch mean squared error.
    pub fn train(
        mut self,
        series: &TimeSeries,
        cfg: &TrainConfig,
    ) -> Result<(Self, Vec<f64>), LstmError> {
        cfg.validate()?;
        self.validate()?;
        let needed = self.lookback + 2;
        if series.len() < needed {
            return Err(LstmError::TooShort { needed, got: series.len() });
        }

        let values = series.values();
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if !(max > min) {
            return Err(LstmError::ConstantSeries { value: min });
        }
        self.scale_min = min;
        self.scale_max = max;

        let scaled: Vec<f64> = values.iter().map(|&v| (v - min) / (max - min)).collect();
        let windows = windows_from_slice(&scaled, self.lookback)?;

        let mut history = Vec::with_capacity(cfg.epochs);
        for epoch in 0..cfg.epochs {
            let mut sum_sq = 0.0;
            for w in &windows {
                let (_, trace) = self.forward_sequence(&w.steps)?;
                let (loss, mut grads) = backward(&self, &trace, w.target);
                sum_sq += loss;
                let norm = grads.global_norm();
                if norm > cfg.clip_norm {
                    grads.scale(cfg.clip_norm / norm);
                }
                apply_update(&mut self, &grads, -cfg.learning_rate);
            }
            let mean = sum_sq / windows.len() as f64;
            if !mean.is_finite() {
                return Err(LstmError::NonFiniteLoss { epoch });
            }
            history.push(mean);
        }
        Ok((self, history))
    }
}

fn param_count(model: &LstmForecaster) -> usize {
    let mut count = 0;
    for l in &model.layers {
        count += 4 * l.hidden_size * (l.hidden_size + l.input_size) + 4 * l.hidden_size;
    }
    count + model.head_w.len() + 1
}

/// Mutable access to parameter `idx` in canonical order: per layer
/// w_f, w_m, w_c, w_o (row-major), b_f, b_m, b_c, b_o; then head
/// weights and bias.
fn param_slot(model: &mut LstmForecaster, mut idx: usize) -> &mut f64 {
    for l in &mut model.layers {
        let w_len = l.hidden_size * (l.hidden_size + l.input_size);
        for w in [&mut l.w_f, &mut l.w_m, &mut l.w_c, &mut l.w_o] {
            if idx < w_len {
                return &mut w.data[idx];
            }
            idx -= w_len;
        }
        for b in [&mut l.b_f, &mut l.b_m, &mut l.b_c, &mut l.b_o] {
            if idx < l.hidden_size {
                return &mut b.0[idx];
            }
            idx -= l.hidden_size;
        }
    }
    if idx < model.head_w.len() {
        return &mut model.head_w.0[idx];
    }
    idx -= model.head_w.len();
    assert_eq!(idx, 0, "parameter index out of range");
    &mut model.head_b
}

/// Compare analytic gradients against central differences
/// `(loss(θ+ε) − loss(θ−ε)) / 2ε` for every parameter; returns the
/// maximum of |a − d| / max(|a| + |d|, 1e-8). Parameters are restored
/// before returning.
///
/// The ReLU head is non-differentiable at exactly zero pre-activation;
/// callers should keep the head pre-activation away from zero (e.g.
/// nudge `head_b`) or the two-sided difference straddles the kink.
pub fn gradient_check(
    model: &mut LstmForecaster,
    window: &[Vector],
    target: f64,
    epsilon: f64,
) -> Result<f64, LstmError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(LstmError::BadEpsilon(epsilon));
    }
    let (_, trace) = model.forward_sequence(window)?;
    let (_, grads) = backward(model, &trace, target);
    let analytic = grads.to_flat();
    debug_assert_eq!(analytic.len(), param_count(model));

    let mut worst: f64 = 0.0;
    for (idx, &a) in analytic.iter().enumerate() {
        let original = *param_slot(model, idx);

        *param_slot(model, idx) = original + epsilon;
        let (pred_plus, _) = model.forward_sequence(window)?;
        let loss_plus = (pred_plus - target).powi(2);

        *param_slot(model, idx) = original - epsilon;
        let (pred_minus, _) = model.forward_sequence(window)?;
        let loss_minus = (pred_minus - target).powi(2);

        *param_slot(model, idx) = original;

        let numeric = (loss_plus - loss_minus) / (2.0 * epsilon);
        let rel = (a - numeric).abs() / (a.abs() + numeric.abs()).max(1e-8);
        worst = worst.max(rel);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn check_window(len: usize, seed: u64) -> (Vec<Vector>, f64) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let window = (0..len).map(|_| Vector(vec![rng.random_range(0.0..1.0)])).collect();
        (window, rng.random_range(0.0..1.0))
    }

    /// Keep the ReLU head comfortably active so central differences never
    /// straddle its kink.
    fn activate_head(model: &mut LstmForecaster, window: &[Vector]) {
        let (_, trace) = model.forward_sequence(window).unwrap();
        if trace.head_pre < 0.1 {
            model.head_b += 0.1 - trace.head_pre;
        }
    }

    #[test]
    fn bptt_matches_finite_differences_single_layer() {
        let mut model = LstmForecaster::new(&[4], 5, 1).unwrap();
        let (window, target) = check_window(5, 2);
        activate_head(&mut model, &window);
        let err = gradient_check(&mut model, &window, target, 1e-5).unwrap();
        assert!(err < 1e-4, "max relative error {err}");
    }

    #[test]
    fn bptt_matches_finite_differences_stacked() {
        let mut model = LstmForecaster::new(&[4, 3], 6, 3).unwrap();
        let (window, target) = check_window(6, 4);
        activate_head(&mut model, &window);
        let err = gradient_check(&mut model, &window, target, 1e-5).unwrap();
        assert!(err < 1e-4, "max relative error {err}");
    }

    #[test]
    fn gradient_check_restores_parameters() {
        let mut model = LstmForecaster::new(&[3], 4, 7).unwrap();
        let (window, target) = check_window(4, 8);
        activate_head(&mut model, &window);
        let before = model.clone();
        gradient_check(&mut model, &window, target, 1e-5).unwrap();
        assert_eq!(model, before);
    }

    #[test]
    fn dead_relu_head_kills_all_gradients() {
        let mut model = LstmForecaster::new(&[3], 4, 9).unwrap();
        model.head_b = -10.0; // pre-activation certainly negative
        let (window, target) = check_window(4, 10);
        let (_, trace) = model.forward_sequence(&window).unwrap();
        assert!(trace.head_pre < 0.0);
        let (_, grads) = backward(&model, &trace, target);
        assert!(grads.to_flat().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn bad_epsilon_rejected() {
        let mut model = LstmForecaster::new(&[2], 3, 0).unwrap();
        let (window, target) = check_window(3, 1);
        assert!(matches!(
            gradient_check(&mut model, &window, target, 0.0),
            Err(LstmError::BadEpsilon(_))
        ));
    }

    #[test]
    fn constant_series_rejected_as_degenerate() {
        let model = LstmForecaster::new(&[4], 3, 0).unwrap();
        let series = TimeSeries::new(vec![2.5; 20]);
        assert!(matches!(
            model.train(&series, &TrainConfig::default()),
            Err(LstmError::ConstantSeries { value }) if value == 2.5
        ));
    }

    #[test]
    fn train_rejects_short_series_and_bad_config() {
        let model = LstmForecaster::new(&[4], 8, 0).unwrap();
        let series = TimeSeries::new((0..9).map(f64::from).collect());
        assert!(matches!(
            model.clone().train(&series, &TrainConfig::default()),
            Err(LstmError::TooShort { needed: 10, got: 9 })
        ));
        let long = synth::sine(40, 20.0, 1.0, 0.0, 0.0);
        for bad in [
            TrainConfig { epochs: 0, ..Default::default() },
            TrainConfig { learning_rate: 0.0, ..Default::default() },
            TrainConfig { clip_norm: -1.0, ..Default::default() },
        ] {
            assert!(matches!(model.clone().train(&long, &bad), Err(LstmError::BadConfig(_))));
        }
    }

    #[test]
    fn loss_decreases_and_training_is_deterministic() {
        let series = synth::sine(80, 20.0, 1.0, 0.0, 0.0);
        let cfg = TrainConfig { epochs: 30, learning_rate: 0.05, clip_norm: 5.0, seed: 0 };
        let run = || {
            let model = LstmForecaster::new(&[8], 4, cfg.seed).unwrap();
            model.train(&series, &cfg).unwrap()
        };
        let (m1, h1) = run();
        let (m2, h2) = run();
        assert_eq!(m1, m2, "identical seeds must give bit-identical models");
        assert_eq!(h1, h2);
        for i in 0..5 {
            assert!(h1[i + 1] < h1[i], "loss should fall early on: {:?}", &h1[..6]);
        }
        assert!(h1.last().unwrap() < &h1[0]);
    }

    #[test]
    fn scale_bounds_are_learned_from_training_data() {
        let series = TimeSeries::new(vec![2.0, 8.0, 4.0, 6.0, 2.0, 8.0, 4.0, 6.0]);
        let model = LstmForecaster::new(&[3], 2, 5).unwrap();
        let (trained, _) = model
            .train(&series, &TrainConfig { epochs: 1, ..Default::default() })
            .unwrap();
        assert_eq!(trained.scale_min, 2.0);
        assert_eq!(trained.scale_max, 8.0);
    }
}
