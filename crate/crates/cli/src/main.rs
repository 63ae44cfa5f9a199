//! `seer` — batch CLI for the forecasting toolkit: CSV in, models and
//! machine-readable reports out.

mod commands;
mod ingest;
mod model_file;
mod models;
mod report;
mod settings;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "seer",
    version,
    about = "Time-series forecasting: stacked LSTM, ARIMA, and exponential smoothing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one model on a CSV series and save it as JSON
    Fit(FitArgs),
    /// Load a saved model and write an h-step forecast CSV
    Forecast(ForecastArgs),
    /// Fit several models on a shared chronological split and write a JSON report
    Compare(CompareArgs),
    /// Write a reproducible synthetic series CSV
    Simulate(SimulateArgs),
}

#[derive(Args)]
pub struct FitArgs {
    /// Input series CSV: a `value` column, or `timestamp,value`
    #[arg(long)]
    pub input: PathBuf,
    /// Model family: lstm | arima | es
    #[arg(long)]
    pub model: String,
    /// Seed for model initialization
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Model settings, e.g. --set p=2 or --set lstm.epochs=300
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Where to write the model JSON
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ForecastArgs {
    /// Path to a model JSON written by `fit`
    #[arg(long)]
    pub model: PathBuf,
    /// History to condition on (required for lstm and arima; optional
    /// for es, which otherwise forecasts from its stored state)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Number of steps to forecast
    #[arg(long)]
    pub horizon: usize,
    /// Where to write the `step,prediction` CSV
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Input series CSV
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated model families, e.g. naive,es,arima,lstm
    #[arg(long)]
    pub model: String,
    /// Chronological train fraction (test span = the rest)
    #[arg(long = "train-frac", default_value_t = 0.8)]
    pub train_frac: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Model settings; prefix with the model name to target one model,
    /// e.g. --set arima.p=2 --set es.variant=holt
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Where to write the JSON report
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Generator: sine | line | trend-season | noise | arima
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generator settings, e.g. --set n=200 --set period=20
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Where to write the `value` CSV
    #[arg(long)]
    pub out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fit(args) => commands::cmd_fit(args),
        Command::Forecast(args) => commands::cmd_forecast(args),
        Command::Compare(args) => commands::cmd_compare(args),
        Command::Simulate(args) => commands::cmd_simulate(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
