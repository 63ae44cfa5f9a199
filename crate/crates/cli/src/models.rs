//! Building, fitting, and forecasting the model families behind one
//! seam, so `fit` and `compare` share exact behavior.

use anyhow::{anyhow, bail, Result};
use seer::arima::{ArimaModel, ArimaModelFile, ArimaOrder};
use seer::lstm::{LstmForecaster, TrainConfig};
use seer::metrics::naive_forecast;
use seer::series::TimeSeries;
use seer::smoothing::{self, EsSpec};

use crate::model_file::{EsModelFile, ModelFile};
use crate::settings::Settings;

/// A model family token as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lstm,
    Arima,
    Es,
    Naive,
}

impl ModelKind {
    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "lstm" => Ok(ModelKind::Lstm),
            "arima" => Ok(ModelKind::Arima),
            "es" => Ok(ModelKind::Es),
            "naive" => Ok(ModelKind::Naive),
            other => bail!("unknown model {other:?}: expected lstm, arima, es, or naive"),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Lstm => "lstm",
            ModelKind::Arima => "arima",
            ModelKind::Es => "es",
            ModelKind::Naive => "naive",
        }
    }
}

/// A fitted model ready to forecast from the end of its training data.
#[derive(Debug)]
pub enum Fitted {
    Lstm(LstmForecaster),
    Arima(ArimaModel),
    Es { spec: EsSpec, fit: smoothing::EsFit },
    Naive,
}

impl Fitted {
    pub fn describe(&self) -> String {
        match self {
            Fitted::Lstm(m) => {
                let sizes: Vec<String> =
                    m.layers.iter().map(|l| l.hidden_size.to_string()).collect();
                format!("lstm(hidden=[{}], lookback={})", sizes.join(","), m.lookback)
            }
            Fitted::Arima(m) => m.order.to_string(),
            Fitted::Es { spec, .. } => match spec {
                EsSpec::HoltWinters { m } => format!("holt_winters(m={m})"),
                other => other.name().to_string(),
            },
            Fitted::Naive => "naive(repeat last value)".to_string(),
        }
    }

    /// Multi-step forecast over the span that follows `train`.
    pub fn forecast(&self, train: &TimeSeries, horizon: usize) -> Result<Vec<f64>> {
        match self {
            Fitted::Lstm(m) => m
                .recursive_forecast(train, horizon)
                .map_err(|e| anyhow!("lstm: {e}")),
            Fitted::Arima(m) => Ok(m.forecast(horizon)),
            Fitted::Es { spec, fit } => {
                Ok(smoothing::forecast(spec, &fit.params, &fit.state, horizon))
            }
            Fitted::Naive => {
                naive_forecast(train.values(), horizon).map_err(|e| anyhow!("metrics: {e}"))
            }
        }
    }

    pub fn to_model_file(&self) -> Option<ModelFile> {
        match self {
            Fitted::Lstm(m) => Some(ModelFile::Lstm { model: m.clone() }),
            Fitted::Arima(m) => Some(ModelFile::Arima { model: ArimaModelFile::from_model(m) }),
            Fitted::Es { spec, fit } => Some(ModelFile::Es {
                model: EsModelFile {
                    spec: *spec,
                    params: fit.params,
                    state: fit.state.clone(),
                },
            }),
            Fitted::Naive => None,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match self {
            Fitted::Arima(m) => m.warnings.clone(),
            _ => Vec::new(),
        }
    }
}

/// Read a model kind's settings and fit it on `train`.
pub fn fit_model(
    kind: ModelKind,
    settings: &Settings,
    seed: u64,
    train: &TimeSeries,
) -> Result<Fitted> {
    match kind {
        ModelKind::Naive => Ok(Fitted::Naive),
        ModelKind::Arima => {
            let scope = "arima";
            let p = settings.get_usize(scope, "p", 1)?;
            let d = settings.get_usize(scope, "d", 0)?;
            let q = settings.get_usize(scope, "q", 0)?;
            let order = ArimaOrder::new(p, d, q).map_err(|e| anyhow!("arima: {e}"))?;
            let model = ArimaModel::fit(train, order).map_err(|e| anyhow!("arima: {e}"))?;
            Ok(Fitted::Arima(model))
        }
        ModelKind::Es => {
            let scope = "es";
            let variant = settings.get_str(scope, "variant", "simple");
            let spec = match variant.as_str() {
                "simple" | "ses" => EsSpec::Simple,
                "holt" => EsSpec::Holt,
                "damped" | "damped_holt" => EsSpec::DampedHolt,
                "holt_winters" | "hw" => {
                    let m = settings.get_usize(scope, "m", 0)?;
                    if m == 0 {
                        bail!("es: holt_winters requires a season length (--set es.m=...)");
                    }
                    EsSpec::HoltWinters { m }
                }
                other => bail!(
                    "es: unknown variant {other:?}: expected simple, holt, damped_holt, or holt_winters"
                ),
            };
            let fit = smoothing::fit(&spec, train).map_err(|e| anyhow!("smoothing: {e}"))?;
            Ok(Fitted::Es { spec, fit })
        }
        ModelKind::Lstm => {
            let scope = "lstm";
            let layers = settings.get_usize(scope, "layers", 1)?;
            let hidden = settings.get_usize(scope, "hidden", 16)?;
            let lookback = settings.get_usize(scope, "lookback", 8)?;
            let cfg = TrainConfig {
                epochs: settings.get_usize(scope, "epochs", 200)?,
                learning_rate: settings.get_f64(scope, "lr", 0.05)?,
                clip_norm: settings.get_f64(scope, "clip", 5.0)?,
                seed,
            };
            if layers == 0 {
                bail!("lstm: layers must be at least 1");
            }
            let hidden_sizes = vec![hidden; layers];
            let model = LstmForecaster::new(&hidden_sizes, lookback, cfg.seed)
                .map_err(|e| anyhow!("lstm: {e}"))?;
            let (trained, _) = model.train(train, &cfg).map_err(|e| anyhow!("lstm: {e}"))?;
            Ok(Fitted::Lstm(trained))
        }
    }
}
