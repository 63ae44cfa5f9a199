//! Conditional-sum-of-squares estimation.
//!
//! Residuals are generated recursively from t = p — the first index with
//! a full set of AR lags — with presample errors fixed at zero. Summing
//! the squares from t = p makes the q = 0 objective identical to the
//! least-squares regression on lagged values, so the exact OLS solution
//! and the simplex search minimize the same function.

use super::diff::difference;
use super::{ArimaError, ArimaModel, ArimaOrder};
use crate::numerics::{solve_linear, Matrix, Vector};
use crate::optim::NelderMead;

/// `ŷ'_t = c + Σ φ_j·y'_{t-j} + Σ θ_j·ε_{t-j}`; lags that reach before
/// the start of `history`/`errors` contribute zero.
pub(crate) fn arma_step(
    c: f64,
    phi: &[f64],
    theta: &[f64],
    history: &[f64],
    errors: &[f64],
    t: usize,
) -> f64 {
    let mut v = c;
    for (j, &coef) in phi.iter().enumerate() {
        if t >= j + 1 {
            let k = t - j - 1;
            if k < history.len() {
                v += coef * history[k];
            }
        }
    }
    for (j, &coef) in theta.iter().enumerate() {
        if t >= j + 1 {
            let k = t - j - 1;
            if k < errors.len() {
                v += coef * errors[k];
            }
        }
    }
    v
}

/// Residual sequence (length = series length, first p entries zero) and
/// the CSS objective Σ_{t ≥ p} ε_t².
pub(crate) fn css_residuals(c: f64, phi: &[f64], theta: &[f64], y: &[f64]) -> (Vec<f64>, f64) {
    let p = phi.len();
    let mut eps = vec![0.0; y.len()];
    let mut sse = 0.0;
    for t in p..y.len() {
        let pred = arma_step(c, phi, theta, y, &eps, t);
        let e = y[t] - pred;
        eps[t] = e;
        sse += e * e;
    }
    (eps, sse)
}

/// Exact least squares for (c, φ) on lagged values; rows t = p..n.
fn ols_ar(y: &[f64], p: usize) -> Result<(f64, Vec<f64>), ArimaError> {
    let n = y.len();
    if p == 0 {
        let c = y.iter().sum::<f64>() / n as f64;
        return Ok((c, Vec::new()));
    }
    let dim = p + 1;
    // Normal equations XᵀX β = Xᵀy with X rows [1, y_{t-1}, …, y_{t-p}].
    let mut xtx = Matrix::zeros(dim, dim);
    let mut xty = Vector::zeros(dim);
    let mut row = vec![0.0; dim];
    for t in p..n {
        row[0] = 1.0;
        for j in 0..p {
            row[1 + j] = y[t - 1 - j];
        }
        for i in 0..dim {
            xty[i] += row[i] * y[t];
            for j in 0..dim {
                let v = xtx.get(i, j) + row[i] * row[j];
                xtx.set(i, j, v);
            }
        }
    }
    let beta = solve_linear(&xtx, &xty).ok_or(ArimaError::Singular)?;
    Ok((beta[0], beta.as_slice()[1..].to_vec()))
}

pub(crate) fn fit(y: &[f64], order: ArimaOrder) -> Result<ArimaModel, ArimaError> {
    let floor = order.adequacy_floor();
    if y.len() < floor {
        return Err(ArimaError::TooShort { needed: floor, got: y.len() });
    }
    let (diffed, initials) = difference(y, order.d)?;
    let (p, q) = (order.p, order.q);

    let (c, phi, theta, converged) = if q == 0 {
        let (c, phi) = ols_ar(&diffed, p)?;
        (c, phi, Vec::new(), true)
    } else {
        // Start from the exact AR solution (MA terms at zero) and refine.
        let (c0, phi0) = ols_ar(&diffed, p)?;
        let mut x0 = Vec::with_capacity(1 + p + q);
        x0.push(c0);
        x0.extend_from_slice(&phi0);
        x0.extend(std::iter::repeat(0.0).take(q));

        let objective = |x: &[f64]| css_residuals(x[0], &x[1..1 + p], &x[1 + p..], &diffed).1;
        let result = NelderMead::default().minimize(objective, &x0);
        let x = result.x;
        (x[0], x[1..1 + p].to_vec(), x[1 + p..].to_vec(), result.converged)
    };

    let (residuals, _) = css_residuals(c, &phi, &theta, &diffed);

    let mut warnings = Vec::new();
    if !converged {
        warnings.push("optimizer hit its iteration budget; returning the best point found".into());
    }
    if phi.iter().map(|v| v.abs()).sum::<f64>() >= 1.0 {
        warnings.push("AR coefficients outside the unit region (Σ|φ| ≥ 1); process may be non-stationary".into());
    }
    if theta.iter().map(|v| v.abs()).sum::<f64>() >= 1.0 {
        warnings.push("MA coefficients outside the unit region (Σ|θ| ≥ 1); process may be non-invertible".into());
    }

    Ok(ArimaModel {
        order,
        c,
        phi,
        theta,
        residuals,
        initials,
        diffed,
        converged,
        warnings,
    })
}

/// CSS objective at an arbitrary parameter point. Exposed so fits can be
/// sanity-checked against the generating parameters of simulated data.
pub fn css_objective(y_diffed: &[f64], c: f64, phi: &[f64], theta: &[f64]) -> f64 {
    css_residuals(c, phi, theta, y_diffed).1
}
