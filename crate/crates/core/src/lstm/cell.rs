//! One LSTM cell.
//!
//! Every gate is the same functional unit — a one-layer network
//! `act(W·[h, x] + b)` over the concatenated previous hidden state and
//! current input — differing only in weights and activation:
//!
//! ```text
//! f_t  = σ(W_f·[h_{t−1}, x_t] + b_f)      erase: how much of c survives
//! c̃_t  = tanh(W_c·[h_{t−1}, x_t] + b_c)   write: proposed change
//! m_t  = σ(W_m·[h_{t−1}, x_t] + b_m)      write: magnitude of the change
//! c_t  = c_{t−1}⊙f_t + c̃_t⊙m_t
//! o_t  = σ(W_o·[h_{t−1}, x_t] + b_o)      read: what to expose
//! h_t  = o_t ⊙ tanh(c_t)
//! ```

use serde::{Deserialize, Serialize};

use super::LstmError;
use crate::numerics::{activation, concat, matvec, Activation, Matrix, Vector};

/// Weights of one cell: four gate matrices `[m, m+n]` and biases `[m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmCellParams {
    pub hidden_size: usize,
    pub input_size: usize,
    pub w_f: Matrix,
    pub w_m: Matrix,
    pub w_c: Matrix,
    pub w_o: Matrix,
    pub b_f: Vector,
    pub b_m: Vector,
    pub b_c: Vector,
    pub b_o: Vector,
}

impl LstmCellParams {
    pub fn zeros(hidden_size: usize, input_size: usize) -> Self {
        let w = || Matrix::zeros(hidden_size, hidden_size + input_size);
        let b = || Vector::zeros(hidden_size);
        LstmCellParams {
            hidden_size,
            input_size,
            w_f: w(),
            w_m: w(),
            w_c: w(),
            w_o: w(),
            b_f: b(),
            b_m: b(),
            b_c: b(),
            b_o: b(),
        }
    }

    pub fn validate(&self) -> Result<(), LstmError> {
        let (m, n) = (self.hidden_size, self.input_size);
        for (name, w) in [("w_f", &self.w_f), ("w_m", &self.w_m), ("w_c", &self.w_c), ("w_o", &self.w_o)] {
            if w.rows != m || w.cols != m + n {
                return Err(LstmError::BadModel(format!(
                    "{name} is {}x{}, expected {}x{}",
                    w.rows,
                    w.cols,
                    m,
                    m + n
                )));
            }
            if !w.all_finite() {
                return Err(LstmError::BadModel(format!("{name} contains non-finite entries")));
            }
        }
        for (name, b) in [("b_f", &self.b_f), ("b_m", &self.b_m), ("b_c", &self.b_c), ("b_o", &self.b_o)] {
            if b.len() != m {
                return Err(LstmError::BadModel(format!(
                    "{name} has length {}, expected {m}",
                    b.len()
                )));
            }
            if !b.all_finite() {
                return Err(LstmError::BadModel(format!("{name} contains non-finite entries")));
            }
        }
        Ok(())
    }
}

/// (cell state, hidden state) — long- and short-term memory.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub c: Vector,
    pub h: Vector,
}

impl LstmState {
    pub fn zeros(hidden_size: usize) -> Self {
        LstmState { c: Vector::zeros(hidden_size), h: Vector::zeros(hidden_size) }
    }
}

/// Gate activations of one step: f, m, o in (0,1); c̃ in (−1,1).
#[derive(Debug, Clone, PartialEq)]
pub struct GateTrace {
    pub f: Vector,
    pub c_tilde: Vector,
    pub m_gate: Vector,
    pub o: Vector,
}

/// Everything backpropagation needs from one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    /// Concatenated `[h_{t−1}, x_t]` the gates were fed.
    pub z: Vector,
    pub c_prev: Vector,
    pub gates: GateTrace,
    pub c: Vector,
    pub tanh_c: Vector,
    pub h: Vector,
}

/// `act(w·[h, x] + b)` — the one-layer network all four gates share.
pub fn functional_unit(
    w: &Matrix,
    b: &Vector,
    h: &Vector,
    x: &Vector,
    act: Activation,
) -> Result<Vector, LstmError> {
    if w.rows != b.len() {
        return Err(LstmError::BadModel(format!(
            "bias length {} does not match {} matrix rows",
            b.len(),
            w.rows
        )));
    }
    let mut pre = matvec(w, &concat(h, x))?;
    for (p, bias) in pre.0.iter_mut().zip(b.iter()) {
        *p += bias;
    }
    Ok(activation(act, &pre))
}

fn gate(w: &Matrix, b: &Vector, z: &Vector, act: Activation) -> Result<Vector, LstmError> {
    let mut pre = matvec(w, z)?;
    for (p, bias) in pre.0.iter_mut().zip(b.iter()) {
        *p += bias;
    }
    Ok(activation(act, &pre))
}

/// One iteration of the cell, returning the new state and the gate trace.
pub fn cell_step(
    params: &LstmCellParams,
    state: &LstmState,
    x: &Vector,
) -> Result<(LstmState, GateTrace), LstmError> {
    let full = cell_step_traced(params, state, x)?;
    Ok((LstmState { c: full.c, h: full.h }, full.gates))
}

pub(crate) fn cell_step_traced(
    params: &LstmCellParams,
    state: &LstmState,
    x: &Vector,
) -> Result<StepTrace, LstmError> {
    let m = params.hidden_size;
    if state.c.len() != m || state.h.len() != m {
        return Err(LstmError::BadModel(format!(
            "state dims ({}, {}) do not match hidden size {m}",
            state.c.len(),
            state.h.len()
        )));
    }
    if x.len() != params.input_size {
        return Err(LstmError::Shape(crate::numerics::ShapeError::VecLen {
            expected: params.input_size,
            actual: x.len(),
        }));
    }

    let z = concat(&state.h, x);
    let f = gate(&params.w_f, &params.b_f, &z, Activation::Sigmoid)?;
    let c_tilde = gate(&params.w_c, &params.b_c, &z, Activation::Tanh)?;
    let m_gate = gate(&params.w_m, &params.b_m, &z, Activation::Sigmoid)?;
    let o = gate(&params.w_o, &params.b_o, &z, Activation::Sigmoid)?;

    // c_t = c_{t−1}⊙f + c̃⊙m, then h_t = o⊙tanh(c_t)
    let c = state.c.hadamard(&f).add(&c_tilde.hadamard(&m_gate));
    let tanh_c = c.map(f64::tanh);
    let h = o.hadamard(&tanh_c);

    Ok(StepTrace {
        z,
        c_prev: state.c.clone(),
        gates: GateTrace { f, c_tilde, m_gate, o },
        c,
        tanh_c,
        h,
    })
}
