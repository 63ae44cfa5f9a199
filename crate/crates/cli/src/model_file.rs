//! On-disk model format: a `kind` tag plus the model's own JSON shape.

use std::path::Path;

use anyhow::{Context, Result};
use seer::arima::ArimaModelFile;
use seer::lstm::LstmForecaster;
use seer::smoothing::{EsParams, EsSpec, EsState};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsModelFile {
    pub spec: EsSpec,
    pub params: EsParams,
    pub state: EsState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelFile {
    Lstm { model: LstmForecaster },
    Arima { model: ArimaModelFile },
    Es { model: EsModelFile },
}

impl ModelFile {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelFile::Lstm { .. } => "lstm",
            ModelFile::Arima { .. } => "arima",
            ModelFile::Es { .. } => "es",
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self).context("serializing model")?;
        json.push('\n');
        std::fs::write(path, json)
            .with_context(|| format!("cannot write model file {}", path.display()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read model file {}", path.display()))?;
        serde_json::from_str(&raw)
            .with_context(|| format!("model file {} is not valid", path.display()))
    }
}
