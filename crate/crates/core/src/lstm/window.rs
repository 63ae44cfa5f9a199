//! Sliding-window supervision: n consecutive observations predict the
//! next one.

use super::LstmError;
use crate::numerics::Vector;
use crate::series::TimeSeries;

/// One supervised pair: `steps` holds n consecutive scalars as 1-dim
/// input vectors, `target` the observation that follows them.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub steps: Vec<Vector>,
    pub target: f64,
}

/// All len−n windows of `series`, in order.
pub fn make_windows(series: &TimeSeries, n: usize) -> Result<Vec<Window>, LstmError> {
    windows_from_slice(series.values(), n)
}

pub(crate) fn windows_from_slice(values: &[f64], n: usize) -> Result<Vec<Window>, LstmError> {
    if n == 0 {
        return Err(LstmError::BadConfig("lookback must be at least 1".into()));
    }
    if values.len() < n + 1 {
        return Err(LstmError::TooShort { needed: n + 1, got: values.len() });
    }
    Ok((0..values.len() - n)
        .map(|i| Window {
            steps: values[i..i + n].iter().map(|&v| Vector(vec![v])).collect(),
            target: values[i + n],
        })
        .collect())
}
