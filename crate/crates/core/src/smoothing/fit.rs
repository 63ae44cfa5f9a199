//! SSE-minimizing parameter search: a coarse grid (step 0.1 per
//! parameter, ties to the lexicographically smallest tuple) followed by
//! Nelder-Mead refinement from the best grid point, with parameters
//! clamped to their boxes.

use super::{smooth, EsError, EsParams, EsSpec, EsState, Smoothed};
use crate::optim::NelderMead;
use crate::series::TimeSeries;

const DAMPING_BOX: (f64, f64) = (0.01, 0.99);

#[derive(Debug, Clone, PartialEq)]
pub struct EsFit {
    pub params: EsParams,
    pub state: EsState,
    pub sse: f64,
    pub fitted: Vec<f64>,
}

fn param_boxes(spec: &EsSpec) -> Vec<(f64, f64)> {
    match spec {
        EsSpec::Simple => vec![(0.0, 1.0)],
        EsSpec::Holt => vec![(0.0, 1.0); 2],
        EsSpec::DampedHolt => vec![(0.0, 1.0), (0.0, 1.0), DAMPING_BOX],
        EsSpec::HoltWinters { .. } => vec![(0.0, 1.0); 3],
    }
}

fn params_from_point(spec: &EsSpec, x: &[f64]) -> EsParams {
    let clamp = |v: f64, (lo, hi): (f64, f64)| v.clamp(lo, hi);
    match spec {
        EsSpec::Simple => EsParams::simple(clamp(x[0], (0.0, 1.0))),
        EsSpec::Holt => EsParams::holt(clamp(x[0], (0.0, 1.0)), clamp(x[1], (0.0, 1.0))),
        EsSpec::DampedHolt => EsParams::damped_holt(
            clamp(x[0], (0.0, 1.0)),
            clamp(x[1], (0.0, 1.0)),
            clamp(x[2], DAMPING_BOX),
        ),
        EsSpec::HoltWinters { .. } => EsParams::holt_winters(
            clamp(x[0], (0.0, 1.0)),
            clamp(x[1], (0.0, 1.0)),
            clamp(x[2], (0.0, 1.0)),
        ),
    }
}

/// Grid values for one parameter axis, clamped into its box.
fn grid_axis(bounds: (f64, f64)) -> Vec<f64> {
    (0..=10)
        .map(|i| (i as f64 / 10.0).clamp(bounds.0, bounds.1))
        .collect()
}

/// Estimate the variant's parameters on `y` by minimizing the sum of
/// squared one-step errors. Deterministic: the grid is scanned in
/// lexicographic order and only a strict improvement moves the incumbent.
pub fn fit(spec: &EsSpec, y: &TimeSeries) -> Result<EsFit, EsError> {
    spec.validate()?;
    let boxes = param_boxes(spec);

    // check feasibility once up front so the grid loop cannot fail
    let probe = params_from_point(spec, &vec![0.5; boxes.len()]);
    smooth(spec, &probe, y)?;

    let axes: Vec<Vec<f64>> = boxes.iter().map(|&b| grid_axis(b)).collect();
    let mut best_point: Vec<f64> = Vec::new();
    let mut best_sse = f64::INFINITY;
    let mut point = vec![0.0; axes.len()];
    grid_scan(&axes, 0, &mut point, &mut |p| {
        let params = params_from_point(spec, p);
        let sse = smooth(spec, &params, y).expect("feasibility checked above").sse;
        if sse < best_sse {
            best_sse = sse;
            best_point = p.to_vec();
        }
    });

    let nm = NelderMead::with_bounds(boxes);
    let result = nm.minimize(
        |x| {
            let params = params_from_point(spec, x);
            smooth(spec, &params, y).expect("feasibility checked above").sse
        },
        &best_point,
    );

    // keep whichever point is better; the simplex can stall on flat regions
    let refined = params_from_point(spec, &result.x);
    let refined_out = smooth(spec, &refined, y).expect("feasibility checked above");
    let (params, Smoothed { state, fitted, sse }) = if refined_out.sse <= best_sse {
        (refined, refined_out)
    } else {
        let p = params_from_point(spec, &best_point);
        let out = smooth(spec, &p, y).expect("feasibility checked above");
        (p, out)
    };

    Ok(EsFit { params, state, sse, fitted })
}

fn grid_scan(axes: &[Vec<f64>], dim: usize, point: &mut Vec<f64>, visit: &mut impl FnMut(&[f64])) {
    if dim == axes.len() {
        visit(point);
        return;
    }
    for &v in &axes[dim] {
        point[dim] = v;
        grid_scan(axes, dim + 1, point, visit);
    }
}
