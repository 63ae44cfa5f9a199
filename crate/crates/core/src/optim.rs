//! Derivative-free minimization with the Nelder-Mead simplex.
//!
//! Used by the ARMA conditional-sum-of-squares fit and the exponential
//! smoothing parameter search, both of which have recursive objectives
//! where gradients are not worth deriving.

/// Outcome of a simplex run.
#[derive(Debug, Clone)]
pub struct OptimResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// False when the iteration budget ran out before the simplex
    /// collapsed below the diameter tolerance.
    pub converged: bool,
}

/// Nelder-Mead settings. Defaults: diameter tolerance 1e-8, 2000 iterations,
/// standard reflection/expansion/contraction/shrink coefficients.
#[derive(Debug, Clone)]
pub struct NelderMead {
    pub diameter_tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
    /// Inclusive per-dimension boxes; candidate points are clamped into
    /// them before evaluation.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead { diameter_tol: 1e-8, max_iter: 2000, initial_step: 0.1, bounds: None }
    }
}

const ALPHA: f64 = 1.0; // reflection
const GAMMA: f64 = 2.0; // expansion
const RHO: f64 = 0.5; // contraction
const SIGMA: f64 = 0.5; // shrink

impl NelderMead {
    pub fn with_bounds(bounds: Vec<(f64, f64)>) -> Self {
        NelderMead { bounds: Some(bounds), ..Self::default() }
    }

    fn clamp(&self, x: &mut [f64]) {
        if let Some(bounds) = &self.bounds {
            for (v, (lo, hi)) in x.iter_mut().zip(bounds) {
                *v = v.clamp(*lo, *hi);
            }
        }
    }

    /// Minimize `f` starting from `x0`.
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> OptimResult {
        let dim = x0.len();
        assert!(dim > 0, "cannot optimize a zero-dimensional problem");

        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        // Initial simplex: x0 plus a step along each axis.
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let mut start = x0.to_vec();
        self.clamp(&mut start);
        let v0 = eval(&start);
        simplex.push((start.clone(), v0));
        for i in 0..dim {
            let mut p = start.clone();
            let step = self.initial_step.max(0.1 * p[i].abs());
            p[i] += step;
            self.clamp(&mut p);
            if p == start {
                // clamped back onto the start point; step inward instead
                p[i] -= step;
                self.clamp(&mut p);
            }
            let v = eval(&p);
            simplex.push((p, v));
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            if self.diameter(&simplex) < self.diameter_tol {
                converged = true;
                break;
            }
            iterations += 1;

            let worst = simplex.len() - 1;
            let centroid = centroid_excluding_worst(&simplex);

            let mut reflected = combine(&centroid, &simplex[worst].0, 1.0 + ALPHA, -ALPHA);
            self.clamp(&mut reflected);
            let fr = eval(&reflected);

            if fr < simplex[0].1 {
                // try to expand further in the same direction
                let mut expanded = combine(&centroid, &simplex[worst].0, 1.0 + ALPHA * GAMMA, -ALPHA * GAMMA);
                self.clamp(&mut expanded);
                let fe = eval(&expanded);
                simplex[worst] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
                continue;
            }
            if fr < simplex[worst - 1].1 {
                simplex[worst] = (reflected, fr);
                continue;
            }

            // contract toward the better of worst/reflected
            let (anchor, f_anchor) = if fr < simplex[worst].1 {
                (reflected.clone(), fr)
            } else {
                (simplex[worst].0.clone(), simplex[worst].1)
            };
            let mut contracted = combine(&centroid, &anchor, 1.0 - RHO, RHO);
            self.clamp(&mut contracted);
            let fc = eval(&contracted);
            if fc < f_anchor {
                simplex[worst] = (contracted, fc);
                continue;
            }

            // shrink everything toward the best vertex
            let best = simplex[0].0.clone();
            for entry in simplex.iter_mut().skip(1) {
                let mut p = combine(&best, &entry.0, 1.0 - SIGMA, SIGMA);
                self.clamp(&mut p);
                let v = eval(&p);
                *entry = (p, v);
            }
        }

        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let (x, value) = simplex.swap_remove(0);
        OptimResult { x, value, iterations, converged }
    }

    /// Max distance from the best vertex to any other, in the sup norm.
    fn diameter(&self, simplex: &[(Vec<f64>, f64)]) -> f64 {
        let best = &simplex[0].0;
        simplex[1..]
            .iter()
            .map(|(p, _)| {
                p.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

fn centroid_excluding_worst(simplex: &[(Vec<f64>, f64)]) -> Vec<f64> {
    let dim = simplex[0].0.len();
    let n = simplex.len() - 1;
    let mut c = vec![0.0; dim];
    for (p, _) in &simplex[..n] {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    for ci in &mut c {
        *ci /= n as f64;
    }
    c
}

fn combine(a: &[f64], b: &[f64], wa: f64, wb: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| wa * x + wb * y).collect()
}
