//! CSV ingestion. Accepts either a single `value` column or
//! `timestamp,value` with a header row; timestamps must be equally
//! spaced (1% relative tolerance).

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use seer::series::TimeSeries;

pub fn ingest_csv(path: &Path) -> Result<TimeSeries> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("cannot open input file {}", path.display()))?;

    let headers: Vec<String> = reader
        .headers()
        .context("input file has no header row")?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();

    enum Layout {
        ValueOnly,
        TimestampValue,
    }
    let layout = match headers.as_slice() {
        [v] if v == "value" => Layout::ValueOnly,
        [t, v] if t == "timestamp" && v == "value" => Layout::TimestampValue,
        other => bail!(
            "unsupported CSV header {:?}: expected `value` or `timestamp,value`",
            other.join(",")
        ),
    };

    let mut values = Vec::new();
    let mut timestamps = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // 1-based, counting the header row
        let record = record.with_context(|| format!("malformed CSV record at line {line}"))?;
        let parse = |field: &str, what: &str| -> Result<f64> {
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("unparseable {what} {field:?} at line {line}"))
        };
        match layout {
            Layout::ValueOnly => {
                let field = record.get(0).ok_or_else(|| anyhow!("empty record at line {line}"))?;
                values.push(parse(field, "value")?);
            }
            Layout::TimestampValue => {
                let t = record.get(0).ok_or_else(|| anyhow!("empty record at line {line}"))?;
                let v = record
                    .get(1)
                    .ok_or_else(|| anyhow!("missing value column at line {line}"))?;
                timestamps.push(parse(t, "timestamp")?);
                values.push(parse(v, "value")?);
            }
        }
    }

    if values.len() < 3 {
        bail!("input needs at least 3 rows, got {}", values.len());
    }

    let series = if timestamps.is_empty() {
        TimeSeries::new(values)
    } else {
        TimeSeries::with_timestamps(timestamps, values).map_err(|e| anyhow!("series: {e}"))?
    };
    Ok(series)
}

/// Write a series as a `value` CSV. Floats are printed with the
/// shortest round-trip representation, so identical data gives an
/// identical file.
pub fn write_value_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut out = String::from("value\n");
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    std::fs::write(path, out)
        .with_context(|| format!("cannot write {}", path.display()))
}

/// Write forecasts as `step,prediction` rows, steps starting at 1.
pub fn write_forecast_csv(path: &Path, predictions: &[f64]) -> Result<()> {
    let mut out = String::from("step,prediction\n");
    for (i, p) in predictions.iter().enumerate() {
        out.push_str(&format!("{},{p}\n", i + 1));
    }
    std::fs::write(path, out)
        .with_context(|| format!("cannot write {}", path.display()))
}
