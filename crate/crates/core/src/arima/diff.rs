//! Differencing and its exact inverse.

use super::ArimaError;

/// Apply `y'_t = y_t − y_{t-1}` exactly `d` times. Returns the
/// differenced series (length `len − d`) and the d leading values
/// needed to invert: `initials[k]` is the first element of the
/// k-times-differenced series.
pub fn difference(y: &[f64], d: usize) -> Result<(Vec<f64>, Vec<f64>), ArimaError> {
    if y.len() <= d {
        return Err(ArimaError::CannotDifference { len: y.len(), d });
    }
    let mut cur = y.to_vec();
    let mut initials = Vec::with_capacity(d);
    for _ in 0..d {
        initials.push(cur[0]);
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok((cur, initials))
}

/// Exact inverse of `difference`: cumulative sums seeded with the stored
/// leading values, innermost level first.
pub fn integrate(yp: &[f64], initials: &[f64], d: usize) -> Result<Vec<f64>, ArimaError> {
    if initials.len() != d {
        return Err(ArimaError::BadInitials { expected: d, got: initials.len() });
    }
    let mut cur = yp.to_vec();
    for &first in initials.iter().rev() {
        let mut next = Vec::with_capacity(cur.len() + 1);
        let mut acc = first;
        next.push(acc);
        for v in cur {
            acc += v;
            next.push(acc);
        }
        cur = next;
    }
    Ok(cur)
}
