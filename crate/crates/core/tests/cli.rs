//! End-to-end checks of the `gls` binary: exit codes, output schemas, and
//! the curve invariants.

use std::process::{Command, Output};

fn gls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn norm_prints_seventeen_digit_value() {
    let out = gls(&["norm", "--family", "indicator:0:1", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1.0000000000000000e0");
}

#[test]
fn norm_supports_infinite_exponent_and_sampling() {
    let out = gls(&["norm", "--family", "gaussian:1", "--p", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 0.3989422804014327).abs() < 1e-4);

    let out = gls(&["norm", "--family", "gaussian:1", "--p", "2", "--sampled"]);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 0.5311259660135984).abs() < 1e-9);
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(gls(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(gls(&["norm", "--family", "nope:1", "--p", "2"]).status.code(), Some(2));
    assert_eq!(
        gls(&["norm", "--family", "gaussian:1", "--p", "0.5"]).status.code(),
        Some(2)
    );
    // power tails are kept away from grid sampling by design
    assert_eq!(
        gls(&["convolve", "--f", "power-tail:1.5", "--g", "gaussian:1"]).status.code(),
        Some(2)
    );
}

#[test]
fn grand_norm_json_shape() {
    let out = gls(&["grand-norm", "--family", "gaussian:1", "--psi", "gaussian:1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["converged"], true);
}

#[test]
fn verify_scaling_passes_and_is_json() {
    let out = gls(&["verify", "scaling"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cases"].as_array().unwrap().len(), 4);
    assert_eq!(v["config"]["command"], "verify-scaling");
}

#[test]
fn counterexample_campaign_reports_the_expected_shape() {
    // the tail-constant case misses its 1% gate at x = 1e6 (the true
    // deviation is 1.13%), so the campaign exits 1 with that single red row
    let out = gls(&["counterexample", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let body = stdout(&out);
    let failing: Vec<&str> = body
        .lines()
        .skip(1)
        .filter(|l| l.ends_with(",false"))
        .collect();
    assert_eq!(failing.len(), 1, "{body}");
    assert!(failing[0].contains("tail-constant"));
    assert!(body.contains("banach-failure,expected-divergence,inf"));
}

#[test]
fn curve_is_increasing_and_finite() {
    let out = gls(&[
        "curve", "--family", "gaussian:1", "--psi", "power-m:2", "--nodes", "64",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "p,ratio");
    let mut prev = f64::NEG_INFINITY;
    for line in lines {
        let (p, ratio) = line.split_once(',').unwrap();
        let p: f64 = p.parse().unwrap();
        let ratio: f64 = ratio.parse().unwrap();
        assert!(p > prev, "p column must increase strictly");
        assert!(ratio.is_finite());
        prev = p;
    }
}

#[test]
fn curve_flags_nonfinite_rows_only_on_request() {
    // |f_{3/2}|_p diverges for p <= 3/2 while psi~ is infinite there too;
    // above 3/2 the curve is the constant 1
    let plain = gls(&["curve", "--family", "power-tail:1.5", "--psi", "tilde", "--nodes", "48"]);
    assert_eq!(plain.status.code(), Some(0));
    assert!(!stdout(&plain).contains("nan"));
    let flagged = gls(&[
        "curve", "--family", "power-tail:1.5", "--psi", "tilde", "--nodes", "48",
        "--include-nonfinite",
    ]);
    assert!(stdout(&flagged).contains("nan"));
    assert!(stdout(&flagged).lines().count() > stdout(&plain).lines().count());
}

#[test]
fn report_written_to_file_matches_stdout() {
    let dir = std::env::temp_dir().join("gls-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scaling.json");
    let to_file = gls(&["verify", "scaling", "--out", path.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    let from_disk = std::fs::read_to_string(&path).unwrap();
    let to_stdout = stdout(&gls(&["verify", "scaling"]));
    assert_eq!(from_disk, to_stdout);
    let bad = gls(&["verify", "scaling", "--out", "/no/such/dir/x.json"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gls_threads_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_gls"))
        .args(["verify", "scaling"])
        .env("GLS_THREADS", "banana")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_gls"))
        .args(["verify", "scaling"])
        .env("GLS_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
