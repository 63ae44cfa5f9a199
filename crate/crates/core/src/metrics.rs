//! Forecast evaluation: RMSE, MAE, bias, chronological splits, and the
//! naive last-value baseline.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("prediction length {pred} does not match truth length {truth}")]
    LengthMismatch { pred: usize, truth: usize },
    #[error("cannot evaluate empty sequences")]
    Empty,
    #[error("train fraction {0} must lie strictly between 0 and 1")]
    BadFraction(f64),
    #[error("split leaves an empty side: {train} train / {test} test")]
    DegenerateSplit { train: usize, test: usize },
    #[error("history is empty")]
    EmptyHistory,
}

/// Point-forecast error summary.
///
/// `bias` is mean(prediction − truth): negative means systematic
/// under-prediction. For any data, rmse ≥ mae (quadratic vs arithmetic
/// mean) and mae ≥ |bias| (triangle inequality).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rmse: f64,
    pub mae: f64,
    pub bias: f64,
    pub n: usize,
}

/// Compare predictions against ground truth.
pub fn evaluate(pred: &[f64], truth: &[f64]) -> Result<EvalReport, MetricsError> {
    if pred.len() != truth.len() {
        return Err(MetricsError::LengthMismatch { pred: pred.len(), truth: truth.len() });
    }
    if pred.is_empty() {
        return Err(MetricsError::Empty);
    }
    let n = pred.len() as f64;
    let mut sq = 0.0;
    let mut abs = 0.0;
    let mut sum = 0.0;
    for (p, t) in pred.iter().zip(truth) {
        let e = p - t;
        sq += e * e;
        abs += e.abs();
        sum += e;
    }
    Ok(EvalReport {
        rmse: (sq / n).sqrt(),
        mae: abs / n,
        bias: sum / n,
        n: pred.len(),
    })
}

/// Chronological train/test split, no shuffling. Train side takes
/// floor(len · fraction) observations.
pub fn split(y: &TimeSeries, train_fraction: f64) -> Result<(TimeSeries, TimeSeries), MetricsError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(MetricsError::BadFraction(train_fraction));
    }
    let cut = (y.len() as f64 * train_fraction).floor() as usize;
    let test_len = y.len() - cut;
    if cut == 0 || test_len == 0 {
        return Err(MetricsError::DegenerateSplit { train: cut, test: test_len });
    }
    let values = y.values();
    Ok((
        TimeSeries::new(values[..cut].to_vec()),
        TimeSeries::new(values[cut..].to_vec()),
    ))
}

/// Repeat the last observed value `h` times. Equals simple
/// exponential smoothing with alpha = 1.
pub fn naive_forecast(history: &[f64], h: usize) -> Result<Vec<f64>, MetricsError> {
    let last = *history.last().ok_or(MetricsError::EmptyHistory)?;
    Ok(vec![last; h])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_prediction_is_all_zero() {
        let r = evaluate(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!((r.rmse, r.mae, r.bias), (0.0, 0.0, 0.0));
    }

    #[test]
    fn hand_computed_case() {
        let r = evaluate(&[0.0, 0.0], &[3.0, 4.0]).unwrap();
        assert!((r.rmse - 12.5f64.sqrt()).abs() < 1e-12);
        assert!((r.mae - 3.5).abs() < 1e-12);
        assert!((r.bias + 3.5).abs() < 1e-12);
        assert_eq!(r.n, 2);
    }

    #[test]
    fn bias_cancels_but_mae_does_not() {
        let r = evaluate(&[1.0, -1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(r.bias, 0.0);
        assert_eq!(r.mae, 1.0);
    }

    #[test]
    fn rejects_mismatch_and_empty() {
        assert!(matches!(evaluate(&[1.0], &[1.0, 2.0]), Err(MetricsError::LengthMismatch { .. })));
        assert!(matches!(evaluate(&[], &[]), Err(MetricsError::Empty)));
    }

    #[test]
    fn split_rules() {
        let ten = TimeSeries::new((0..10).map(f64::from).collect());
        let (tr, te) = split(&ten, 0.8).unwrap();
        assert_eq!((tr.len(), te.len()), (8, 2));

        let five = TimeSeries::new((0..5).map(f64::from).collect());
        let (tr, te) = split(&five, 0.5).unwrap();
        assert_eq!((tr.len(), te.len()), (2, 3));

        let two = TimeSeries::new(vec![1.0, 2.0]);
        let (tr, te) = split(&two, 0.5).unwrap();
        assert_eq!((tr.len(), te.len()), (1, 1));

        assert!(split(&two, 1.0).is_err());
        let three = TimeSeries::new(vec![1.0, 2.0, 3.0]);
        assert!(matches!(split(&three, 0.1), Err(MetricsError::DegenerateSplit { .. })));
    }

    #[test]
    fn naive_repeats_last() {
        assert_eq!(naive_forecast(&[1.0, 2.0, 3.0], 2).unwrap(), vec![3.0, 3.0]);
        assert_eq!(naive_forecast(&[7.0], 1).unwrap(), vec![7.0]);
        assert!(naive_forecast(&[], 1).is_err());
    }

    proptest! {
        #[test]
        fn rmse_mae_bias_ordering(
            pred in prop::collection::vec(-100.0..100.0f64, 1..40),
            offs in prop::collection::vec(-100.0..100.0f64, 40),
        ) {
            let truth: Vec<f64> = pred.iter().zip(&offs).map(|(p, o)| p + o).collect();
            let r = evaluate(&pred, &truth).unwrap();
            prop_assert!(r.rmse >= r.mae - 1e-12);
            prop_assert!(r.mae >= r.bias.abs() - 1e-12);
        }

        #[test]
        fn evaluate_is_permutation_invariant(
            pairs in prop::collection::vec((-50.0..50.0f64, -50.0..50.0f64), 2..20),
        ) {
            let pred: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let truth: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let fwd = evaluate(&pred, &truth).unwrap();
            let rp: Vec<f64> = pred.iter().rev().copied().collect();
            let rt: Vec<f64> = truth.iter().rev().copied().collect();
            let rev = evaluate(&rp, &rt).unwrap();
            prop_assert!((fwd.rmse - rev.rmse).abs() < 1e-12);
            prop_assert!((fwd.mae - rev.mae).abs() < 1e-12);
            prop_assert!((fwd.bias - rev.bias).abs() < 1e-12);
        }
    }
}
