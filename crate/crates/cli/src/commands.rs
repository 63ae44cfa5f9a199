//! The four subcommands.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use seer::arima::{simulate, ArimaOrder};
use seer::metrics::{evaluate, split};
use seer::series::TimeSeries;
use seer::smoothing;
use seer::synth;

use crate::ingest::{ingest_csv, write_forecast_csv, write_value_csv};
use crate::model_file::ModelFile;
use crate::models::{fit_model, Fitted, ModelKind};
use crate::report::{ModelReport, ReportBody, ReportFile, ReportMeta, SplitInfo};
use crate::settings::Settings;
use crate::{CompareArgs, FitArgs, ForecastArgs, SimulateArgs};

pub fn cmd_fit(args: &FitArgs) -> Result<()> {
    let series = ingest_csv(&args.input)?;
    let kind = ModelKind::parse(&args.model)?;
    if kind == ModelKind::Naive {
        bail!("naive has no parameters to fit; request it in `compare` instead");
    }
    let settings = Settings::parse(&args.set)?;
    let fitted = fit_model(kind, &settings, args.seed, &series)?;
    settings.ensure_all_consumed()?;

    for w in fitted.warnings() {
        eprintln!("warning: {}: {w}", kind.name());
    }
    let file = fitted.to_model_file().expect("non-naive models serialize");
    file.save(&args.out)?;
    println!(
        "fitted {} on {} observations -> {}",
        fitted.describe(),
        series.len(),
        args.out.display()
    );
    Ok(())
}

pub fn cmd_forecast(args: &ForecastArgs) -> Result<()> {
    if args.horizon == 0 {
        bail!("horizon must be at least 1");
    }
    let file = ModelFile::load(&args.model)?;
    let input = match &args.input {
        Some(path) => Some(ingest_csv(path)?),
        None => None,
    };

    let predictions = match &file {
        ModelFile::Lstm { model } => {
            let series = input
                .ok_or_else(|| anyhow!("lstm forecasting needs --input (the history to extend)"))?;
            model.validate().map_err(|e| anyhow!("lstm: {e}"))?;
            model
                .recursive_forecast(&series, args.horizon)
                .map_err(|e| anyhow!("lstm: {e}"))?
        }
        ModelFile::Arima { model } => {
            let series = input
                .ok_or_else(|| anyhow!("arima forecasting needs --input (the history to extend)"))?;
            let conditioned =
                model.clone().into_model(&series).map_err(|e| anyhow!("arima: {e}"))?;
            conditioned.forecast(args.horizon)
        }
        ModelFile::Es { model } => {
            let state = match input {
                // re-smooth the provided history with the stored parameters
                Some(series) => smoothing::smooth(&model.spec, &model.params, &series)
                    .map_err(|e| anyhow!("smoothing: {e}"))?
                    .state,
                None => model.state.clone(),
            };
            smoothing::forecast(&model.spec, &model.params, &state, args.horizon)
        }
    };

    write_forecast_csv(&args.out, &predictions)?;
    println!(
        "{} forecast, {} steps -> {}",
        file.kind(),
        args.horizon,
        args.out.display()
    );
    Ok(())
}

pub fn cmd_compare(args: &CompareArgs) -> Result<()> {
    let started = Instant::now();
    let series = ingest_csv(&args.input)?;
    let (train, test) =
        split(&series, args.train_frac).map_err(|e| anyhow!("metrics: {e}"))?;
    let horizon = test.len();

    let mut kinds = Vec::new();
    for token in args.model.split(',') {
        let kind = ModelKind::parse(token.trim())?;
        if kinds.contains(&kind) {
            bail!("model {:?} requested twice", kind.name());
        }
        kinds.push(kind);
    }
    if kinds.is_empty() {
        bail!("no models requested");
    }

    let settings = Settings::parse(&args.set)?;
    let mut models = BTreeMap::new();
    let mut fit_seconds = BTreeMap::new();
    for kind in &kinds {
        let t0 = Instant::now();
        let fitted = fit_model(*kind, &settings, args.seed, &train)
            .with_context(|| format!("fitting {}", kind.name()))?;
        fit_seconds.insert(kind.name().to_string(), t0.elapsed().as_secs_f64());
        let forecast = fitted.forecast(&train, horizon)?;
        let eval = evaluate(&forecast, test.values()).map_err(|e| anyhow!("metrics: {e}"))?;
        models.insert(
            kind.name().to_string(),
            ModelReport { description: fitted.describe(), eval, warnings: fitted.warnings() },
        );
    }
    settings.ensure_all_consumed()?;

    let naive = Fitted::Naive;
    let naive_eval = evaluate(&naive.forecast(&train, horizon)?, test.values())
        .map_err(|e| anyhow!("metrics: {e}"))?;

    let report = ReportFile {
        body: ReportBody {
            command: "compare".into(),
            input: args.input.display().to_string(),
            train_fraction: args.train_frac,
            seed: args.seed,
            settings: settings.entries().clone(),
            split: SplitInfo {
                train_len: train.len(),
                test_len: test.len(),
                test_start_index: train.len(),
            },
            horizon,
            models,
            baseline_naive: ModelReport {
                description: naive.describe(),
                eval: naive_eval,
                warnings: Vec::new(),
            },
        },
        meta: ReportMeta { fit_seconds, total_seconds: started.elapsed().as_secs_f64() },
    };

    let mut json = serde_json::to_string_pretty(&report).context("serializing report")?;
    json.push('\n');
    std::fs::write(&args.out, json)
        .with_context(|| format!("cannot write report {}", args.out.display()))?;

    println!("compared {} models over a {}-step test span:", report.body.models.len(), horizon);
    for (name, m) in &report.body.models {
        println!(
            "  {name:<6} {:<26} rmse {:.6}  mae {:.6}  bias {:+.6}",
            m.description, m.eval.rmse, m.eval.mae, m.eval.bias
        );
    }
    let b = &report.body.baseline_naive.eval;
    println!("  naive baseline: rmse {:.6}  mae {:.6}  bias {:+.6}", b.rmse, b.mae, b.bias);
    println!("report -> {}", args.out.display());
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let settings = Settings::parse(&args.set)?;
    let scope = args.model.as_str();
    let n = settings.get_usize(scope, "n", 200)?;
    if n == 0 {
        bail!("n must be at least 1");
    }

    let values: Vec<f64> = match scope {
        "sine" => {
            let period = settings.get_f64(scope, "period", 40.0)?;
            let amplitude = settings.get_f64(scope, "amplitude", 1.0)?;
            let phase = settings.get_f64(scope, "phase", 0.0)?;
            let offset = settings.get_f64(scope, "offset", 0.0)?;
            let sigma = settings.get_f64(scope, "sigma", 0.0)?;
            with_noise(synth::sine(n, period, amplitude, phase, offset), sigma, args.seed)?
        }
        "line" => {
            let intercept = settings.get_f64(scope, "intercept", 0.0)?;
            let slope = settings.get_f64(scope, "slope", 1.0)?;
            let sigma = settings.get_f64(scope, "sigma", 0.0)?;
            with_noise(synth::line(n, intercept, slope), sigma, args.seed)?
        }
        "trend-season" | "trend_season" => {
            let base = settings.get_f64(scope, "base", 0.0)?;
            let slope = settings.get_f64(scope, "slope", 0.0)?;
            let pattern = settings
                .get_f64_list(scope, "pattern")?
                .ok_or_else(|| anyhow!("trend-season requires --set pattern=v1,v2,..."))?;
            if pattern.is_empty() {
                bail!("trend-season pattern must be non-empty");
            }
            let sigma = settings.get_f64(scope, "sigma", 0.0)?;
            with_noise(synth::trend_season(n, base, slope, &pattern), sigma, args.seed)?
        }
        "noise" => {
            let sigma = settings.get_f64(scope, "sigma", 1.0)?;
            synth::white_noise(n, sigma, args.seed).values().to_vec()
        }
        "arima" => {
            let p = settings.get_usize(scope, "p", 0)?;
            let d = settings.get_usize(scope, "d", 0)?;
            let q = settings.get_usize(scope, "q", 0)?;
            let order = ArimaOrder::new(p, d, q).map_err(|e| anyhow!("arima: {e}"))?;
            let phi = settings.get_f64_list(scope, "phi")?.unwrap_or_default();
            let theta = settings.get_f64_list(scope, "theta")?.unwrap_or_default();
            let c = settings.get_f64(scope, "c", 0.0)?;
            let sigma = settings.get_f64(scope, "sigma", 1.0)?;
            simulate(&order, c, &phi, &theta, n, sigma, args.seed)
                .map_err(|e| anyhow!("arima: {e}"))?
                .values()
                .to_vec()
        }
        other => bail!(
            "unknown generator {other:?}: expected sine, line, trend-season, noise, or arima"
        ),
    };
    settings.ensure_all_consumed()?;

    write_value_csv(&args.out, &values)?;
    println!("{} series, {} points -> {}", scope, values.len(), args.out.display());
    Ok(())
}

/// Overlay seeded Gaussian noise on a deterministic generator.
fn with_noise(base: TimeSeries, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if sigma < 0.0 {
        bail!("sigma must be >= 0, got {sigma}");
    }
    if sigma == 0.0 {
        return Ok(base.values().to_vec());
    }
    let noise = synth::white_noise(base.len(), sigma, seed);
    Ok(base
        .values()
        .iter()
        .zip(noise.values())
        .map(|(v, e)| v + e)
        .collect())
}
