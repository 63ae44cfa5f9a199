//! Lookback selection: train one model per candidate window size and
//! pick the elbow of the validation RMSE profile.

use super::model::LstmForecaster;
use super::train::TrainConfig;
use super::window::windows_from_slice;
use super::LstmError;
use crate::series::TimeSeries;

/// Slack when deciding that the RMSE curve has stopped improving,
/// in scaled (normalized) units.
pub const ELBOW_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct LookbackSelection {
    pub chosen: usize,
    /// Set when RMSE was still falling at the largest candidate — the
    /// profile had no elbow and the last candidate was returned.
    pub monotone_warning: bool,
    /// (candidate, validation RMSE in scaled units), in candidate order.
    pub profile: Vec<(usize, f64)>,
}

/// The elbow rule over an (ascending-candidate, RMSE) profile: the
/// smallest n whose successor no longer improves by more than
/// `ELBOW_TOL`. A profile that keeps improving to the end returns the
/// last candidate with the monotone warning set.
pub fn elbow_choice(profile: &[(usize, f64)]) -> (usize, bool) {
    assert!(!profile.is_empty(), "elbow_choice needs a non-empty profile");
    for pair in profile.windows(2) {
        if pair[1].1 >= pair[0].1 - ELBOW_TOL {
            return (pair[0].0, false);
        }
    }
    (profile[profile.len() - 1].0, true)
}

/// For each candidate lookback: train on the first 80% of that
/// candidate's windows, score one-step RMSE (scaled space) on the rest,
/// then apply the elbow rule. Candidate i trains from seed
/// `cfg.seed + i`, so evaluations are independent and reproducible in
/// any execution order.
pub fn select_lookback(
    series: &TimeSeries,
    candidates: &[usize],
    hidden_sizes: &[usize],
    cfg: &TrainConfig,
) -> Result<LookbackSelection, LstmError> {
    if candidates.is_empty() || candidates.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LstmError::BadCandidates);
    }
    let largest = *candidates.last().expect("non-empty");
    if series.len() < largest + 4 {
        return Err(LstmError::TooShort { needed: largest + 4, got: series.len() });
    }

    let mut profile = Vec::with_capacity(candidates.len());
    for (i, &n) in candidates.iter().enumerate() {
        let total_windows = series.len() - n;
        let train_windows = ((total_windows as f64) * 0.8).floor() as usize;
        if train_windows < 2 || total_windows - train_windows < 1 {
            return Err(LstmError::TooShort { needed: n + 4, got: series.len() });
        }

        // train on the prefix that exactly covers the training windows
        let prefix = series.prefix(n + train_windows);
        let model = LstmForecaster::new(hidden_sizes, n, cfg.seed + i as u64)?;
        let (trained, _) = model.train(&prefix, cfg)?;

        // one-step predictions on the held-out windows, in scaled space
        let scaled: Vec<f64> = series.values().iter().map(|&v| trained.normalize(v)).collect();
        let windows = windows_from_slice(&scaled, n)?;
        let mut sum_sq = 0.0;
        let mut count = 0usize;
        for w in windows.iter().skip(train_windows) {
            let pred = trained.predict(&w.steps)?;
            let e = pred - w.target;
            sum_sq += e * e;
            count += 1;
        }
        profile.push((n, (sum_sq / count as f64).sqrt()));
    }

    let (chosen, monotone_warning) = elbow_choice(&profile);
    Ok(LookbackSelection { chosen, monotone_warning, profile })
}
