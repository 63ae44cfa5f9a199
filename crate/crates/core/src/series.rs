//! Equally spaced scalar time series.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("timestamps length {timestamps} does not match values length {values}")]
    LengthMismatch { timestamps: usize, values: usize },
    #[error("timestamps are not equally spaced: gap {gap} at index {index} vs base step {step}")]
    UnequalSpacing { index: usize, gap: f64, step: f64 },
    #[error("series needs at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },
}

/// A sequence of scalar observations at equal time intervals.
/// Timestamps are optional; when present they are validated for
/// equal spacing (1% relative tolerance) at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    timestamps: Option<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Self {
        TimeSeries { values, timestamps: None }
    }

    pub fn with_timestamps(timestamps: Vec<f64>, values: Vec<f64>) -> Result<Self, SeriesError> {
        if timestamps.len() != values.len() {
            return Err(SeriesError::LengthMismatch {
                timestamps: timestamps.len(),
                values: values.len(),
            });
        }
        check_equal_spacing(&timestamps)?;
        Ok(TimeSeries { values, timestamps: Some(timestamps) })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn timestamps(&self) -> Option<&[f64]> {
        self.timestamps.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Sub-series of the first `n` observations (timestamps dropped).
    pub fn prefix(&self, n: usize) -> TimeSeries {
        TimeSeries::new(self.values[..n.min(self.values.len())].to_vec())
    }

    pub fn require_len(&self, needed: usize) -> Result<(), SeriesError> {
        if self.values.len() < needed {
            return Err(SeriesError::TooShort { needed, got: self.values.len() });
        }
        Ok(())
    }
}

impl From<Vec<f64>> for TimeSeries {
    fn from(values: Vec<f64>) -> Self {
        TimeSeries::new(values)
    }
}

/// Equal spacing within 1% relative tolerance against the first gap.
fn check_equal_spacing(timestamps: &[f64]) -> Result<(), SeriesError> {
    if timestamps.len() < 2 {
        return Ok(());
    }
    let step = timestamps[1] - timestamps[0];
    for (i, pair) in timestamps.windows(2).enumerate().skip(1) {
        let gap = pair[1] - pair[0];
        if (gap - step).abs() > 0.01 * step.abs() {
            return Err(SeriesError::UnequalSpacing { index: i + 1, gap, step });
        }
    }
    Ok(())
}
