//! End-to-end tests driving the `seer` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn seer() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seer"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = seer().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {:?} failed:\nstdout: {}\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn run_err(args: &[&str]) -> String {
    let out = seer().args(args).output().expect("binary runs");
    assert!(!out.status.success(), "command {args:?} unexpectedly succeeded");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_csv(dir: &Path, name: &str, values: &[f64]) -> PathBuf {
    let p = dir.join(name);
    let mut body = String::from("value\n");
    for v in values {
        body.push_str(&format!("{v}\n"));
    }
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn simulate_same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (out, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        run_ok(&[
            "simulate", "--model", "noise", "--seed", seed, "--set", "n=50", "--out",
            path_str(out),
        ]);
    }
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap());
    assert_ne!(bytes_a, std::fs::read(&c).unwrap());
}

#[test]
fn simulate_rejects_n_zero_and_unknown_generator() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let err = run_err(&["simulate", "--model", "sine", "--set", "n=0", "--out", path_str(&out)]);
    assert!(err.contains("n must be at least 1"), "{err}");
    let err = run_err(&["simulate", "--model", "brownian", "--out", path_str(&out)]);
    assert!(err.contains("unknown generator"), "{err}");
}

#[test]
fn simulated_ar2_round_trips_into_arima_fit() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("ar2.csv");
    run_ok(&[
        "simulate", "--model", "arima", "--seed", "0", "--set", "n=2000", "--set", "p=2",
        "--set", "phi=0.5,-0.3", "--out", path_str(&series),
    ]);
    let model = dir.path().join("ar2.json");
    run_ok(&[
        "fit", "--input", path_str(&series), "--model", "arima", "--set", "p=2", "--out",
        path_str(&model),
    ]);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(json["kind"], "arima");
    let phi = json["model"]["phi"].as_array().unwrap();
    assert!((phi[0].as_f64().unwrap() - 0.5).abs() < 0.1);
    assert!((phi[1].as_f64().unwrap() + 0.3).abs() < 0.1);
}

#[test]
fn drift_model_forecast_matches_hand_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    // steps of +2 ending at 10; 11 observations meet the (0,1,0) adequacy floor
    let series_long = write_csv(
        dir.path(),
        "drift_long.csv",
        &(-5..=5).map(|i| 2.0 * i as f64).collect::<Vec<_>>(),
    );
    let model = dir.path().join("drift.json");
    run_ok(&[
        "fit", "--input", path_str(&series_long), "--model", "arima", "--set", "p=0", "--set",
        "d=1", "--set", "q=0", "--out", path_str(&model),
    ]);
    let fc = dir.path().join("fc.csv");
    run_ok(&[
        "forecast", "--model", path_str(&model), "--input", path_str(&series_long),
        "--horizon", "3", "--out", path_str(&fc),
    ]);
    let body = std::fs::read_to_string(&fc).unwrap();
    assert_eq!(body, "step,prediction\n1,12\n2,14\n3,16\n");
}

#[test]
fn es_forecast_works_from_stored_state_alone() {
    let dir = tempfile::tempdir().unwrap();
    let line: Vec<f64> = (0..40).map(|t| 3.0 + 2.0 * t as f64).collect();
    let series = write_csv(dir.path(), "line.csv", &line);
    let model = dir.path().join("holt.json");
    run_ok(&[
        "fit", "--input", path_str(&series), "--model", "es", "--set", "variant=holt",
        "--out", path_str(&model),
    ]);
    let fc = dir.path().join("fc.csv");
    run_ok(&["forecast", "--model", path_str(&model), "--horizon", "3", "--out", path_str(&fc)]);
    let body = std::fs::read_to_string(&fc).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("step,prediction"));
    for (k, line) in lines.enumerate() {
        let (_, v) = line.split_once(',').unwrap();
        let truth = 3.0 + 2.0 * (40 + k) as f64;
        assert!((v.parse::<f64>().unwrap() - truth).abs() < 1e-6, "step {k}: {line}");
    }
}

#[test]
fn lstm_requires_history_to_forecast() {
    let dir = tempfile::tempdir().unwrap();
    let sine = dir.path().join("sine.csv");
    run_ok(&[
        "simulate", "--model", "sine", "--set", "n=60", "--set", "period=20", "--out",
        path_str(&sine),
    ]);
    let model = dir.path().join("lstm.json");
    run_ok(&[
        "fit", "--input", path_str(&sine), "--model", "lstm", "--set", "hidden=4", "--set",
        "lookback=4", "--set", "epochs=10", "--out", path_str(&model),
    ]);
    let fc = dir.path().join("fc.csv");
    let err = run_err(&["forecast", "--model", path_str(&model), "--horizon", "2", "--out", path_str(&fc)]);
    assert!(err.contains("needs --input"), "{err}");
    run_ok(&[
        "forecast", "--model", path_str(&model), "--input", path_str(&sine), "--horizon", "2",
        "--out", path_str(&fc),
    ]);
    let body = std::fs::read_to_string(&fc).unwrap();
    assert_eq!(body.lines().count(), 3);
}

#[test]
fn lstm_fit_is_reproducible_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let sine = dir.path().join("sine.csv");
    run_ok(&[
        "simulate", "--model", "sine", "--set", "n=60", "--set", "period=15", "--out",
        path_str(&sine),
    ]);
    let m1 = dir.path().join("m1.json");
    let m2 = dir.path().join("m2.json");
    for m in [&m1, &m2] {
        run_ok(&[
            "fit", "--input", path_str(&sine), "--model", "lstm", "--seed", "3", "--set",
            "hidden=4", "--set", "lookback=4", "--set", "epochs=15", "--out", path_str(m),
        ]);
    }
    assert_eq!(std::fs::read(&m1).unwrap(), std::fs::read(&m2).unwrap());
}

#[test]
fn compare_on_line_holt_beats_naive() {
    let dir = tempfile::tempdir().unwrap();
    let line = dir.path().join("line.csv");
    run_ok(&[
        "simulate", "--model", "line", "--set", "n=60", "--set", "intercept=3", "--set",
        "slope=2", "--out", path_str(&line),
    ]);
    let report_path = dir.path().join("report.json");
    run_ok(&[
        "compare", "--input", path_str(&line), "--model", "naive,es", "--set",
        "es.variant=holt", "--out", path_str(&report_path),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    let es_rmse = report["body"]["models"]["es"]["eval"]["rmse"].as_f64().unwrap();
    let naive_rmse = report["body"]["baseline_naive"]["eval"]["rmse"].as_f64().unwrap();
    assert!(es_rmse < naive_rmse, "holt {es_rmse} should beat naive {naive_rmse} on a line");

    // the report is checkable: nothing was evaluated on training rows
    let test_len = report["body"]["split"]["test_len"].as_u64().unwrap();
    assert_eq!(report["body"]["horizon"].as_u64().unwrap(), test_len);
    for (_, m) in report["body"]["models"].as_object().unwrap() {
        assert_eq!(m["eval"]["n"].as_u64().unwrap(), test_len);
    }
}

#[test]
fn compare_on_white_noise_nobody_shines() {
    let dir = tempfile::tempdir().unwrap();
    let noise = dir.path().join("noise.csv");
    run_ok(&[
        "simulate", "--model", "noise", "--seed", "0", "--set", "n=400", "--set", "sigma=1",
        "--out", path_str(&noise),
    ]);
    let report_path = dir.path().join("report.json");
    run_ok(&[
        "compare", "--input", path_str(&noise), "--model", "naive,es,arima", "--set",
        "arima.p=1", "--out", path_str(&report_path),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();

    // test-span standard deviation is the floor no model should beat by >10%
    let values: Vec<f64> = std::fs::read_to_string(&noise)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.parse().unwrap())
        .collect();
    let test = &values[320..];
    let mean = test.iter().sum::<f64>() / test.len() as f64;
    let sd = (test.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / test.len() as f64).sqrt();

    let naive_bias = report["body"]["baseline_naive"]["eval"]["bias"].as_f64().unwrap();
    assert!(naive_bias.abs() < 0.5, "naive bias {naive_bias} should be near zero");
    for (name, m) in report["body"]["models"].as_object().unwrap() {
        let rmse = m["eval"]["rmse"].as_f64().unwrap();
        assert!(
            rmse > 0.9 * sd,
            "{name} rmse {rmse} implausibly beats the noise floor {sd}"
        );
    }
}

#[test]
fn error_paths_exit_nonzero_with_named_causes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.json");

    let err = run_err(&["fit", "--input", "/no/such.csv", "--model", "arima", "--out", path_str(&out)]);
    assert!(err.contains("cannot open"), "{err}");

    let gap = dir.path().join("gap.csv");
    std::fs::write(&gap, "timestamp,value\n0,1\n1,2\n3,4\n").unwrap();
    let err = run_err(&["fit", "--input", path_str(&gap), "--model", "arima", "--out", path_str(&out)]);
    assert!(err.contains("not equally spaced"), "{err}");

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "value\n1\nabc\n3\n").unwrap();
    let err = run_err(&["fit", "--input", path_str(&bad), "--model", "arima", "--out", path_str(&out)]);
    assert!(err.contains("line 3"), "{err}");

    let series = write_csv(dir.path(), "s.csv", &(0..30).map(f64::from).collect::<Vec<_>>());
    let err = run_err(&[
        "fit", "--input", path_str(&series), "--model", "arima", "--set", "typo=1", "--out",
        path_str(&out),
    ]);
    assert!(err.contains("unknown --set key"), "{err}");

    let err = run_err(&[
        "fit", "--input", path_str(&series), "--model", "naive", "--out", path_str(&out),
    ]);
    assert!(err.contains("naive has no parameters"), "{err}");
}

#[test]
fn constant_series_rejected_for_lstm_with_module_name() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write_csv(dir.path(), "flat.csv", &[5.0; 30]);
    let out = dir.path().join("m.json");
    let err = run_err(&[
        "fit", "--input", path_str(&flat), "--model", "lstm", "--set", "lookback=4", "--out",
        path_str(&out),
    ]);
    assert!(err.contains("lstm") && err.contains("constant series"), "{err}");
}
