//! Machine-readable compare reports.
//!
//! Everything deterministic lives under `body`; wall-clock timings go
//! in `meta`, so two runs with the same config and seed produce
//! byte-identical bodies.

use std::collections::BTreeMap;

use seer::metrics::EvalReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub body: ReportBody,
    pub meta: ReportMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub command: String,
    pub input: String,
    pub train_fraction: f64,
    pub seed: u64,
    pub settings: BTreeMap<String, String>,
    pub split: SplitInfo,
    /// Forecast horizon = length of the test span.
    pub horizon: usize,
    /// Keyed and therefore ordered by model name.
    pub models: BTreeMap<String, ModelReport>,
    pub baseline_naive: ModelReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitInfo {
    pub train_len: usize,
    pub test_len: usize,
    /// First index of the test span; no evaluated row lies before it.
    pub test_start_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub description: String,
    pub eval: EvalReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub fit_seconds: BTreeMap<String, f64>,
    pub total_seconds: f64,
}
