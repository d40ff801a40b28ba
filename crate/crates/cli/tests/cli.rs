use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn psi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psi")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr_error(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    v["error"].clone()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn estimate_normal_variance_example() {
    let data = fixture("example_estimate.csv");
    let out = psi(&["estimate", "--model", "normal_variance", "--param", "m=2", "--data", path(&data)]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["theta"].as_f64().unwrap() - 1.0).abs() <= 2e-10);
    assert_eq!(v["n"], 2);
    assert_eq!(v["sum_weights"], 2.0);
    assert_eq!(v["crossing"], "ZeroCrossing");
    let b = v["bracket"].as_array().unwrap();
    assert!(b[0].as_f64().unwrap() <= 1.0 && 1.0 <= b[1].as_f64().unwrap());
}

#[test]
fn estimate_from_config_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("nested/est.json");
    let out = psi(&["estimate", "--config", path(&fixture("estimate.toml")), "--out", path(&out_path)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!((v["theta"].as_f64().unwrap() - 1.0).abs() <= 2e-10);
}

#[test]
fn estimate_flag_overrides_config() {
    // m = 0 instead of 2: theta = (1 + 9) / 2
    let out = psi(&["estimate", "--config", path(&fixture("estimate.toml")), "--param", "m=0"]);
    assert_eq!(code(&out), 0);
    assert!((stdout_json(&out)["theta"].as_f64().unwrap() - 5.0).abs() <= 1e-9);
}

#[test]
fn estimate_location_single_observation() {
    let out = psi(&["estimate", "--model", "location", "--inline", "5"]);
    assert_eq!(code(&out), 0);
    assert!((stdout_json(&out)["theta"].as_f64().unwrap() - 5.0).abs() <= 6e-10);
}

#[test]
fn estimate_weights_column_and_inline_weights() {
    let out = psi(&["estimate", "--model", "location", "--data", path(&fixture("weighted.csv"))]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["theta"].as_f64().unwrap() - 2.5).abs() <= 1e-9);
    assert_eq!(v["n"], 3);
    assert_eq!(v["sum_weights"], 4.0);

    let data = fixture("custom_weights.csv");
    let out = psi(&["estimate", "--model", "location", "--data", path(&data), "--weights-col", "weight"]);
    assert!((stdout_json(&out)["theta"].as_f64().unwrap() - 5.0 / 3.0).abs() <= 1e-9);
    let out = psi(&["estimate", "--model", "location", "--data", path(&data), "--weights", "1,3"]);
    assert!((stdout_json(&out)["theta"].as_f64().unwrap() - 2.5).abs() <= 1e-9);
}

#[test]
fn estimate_weighted_median_is_jump() {
    // the weighted sign sum is +1 just below 1 and -3 just above
    let data = fixture("median.csv");
    let out = psi(&["estimate", "--model", "sign", "--data", path(&data), "--weights", "1,1,2,1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["crossing"], "JumpCrossing");
    assert!((v["theta"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn missing_data_file_is_exit_1() {
    let out = psi(&["estimate", "--model", "normal_variance", "--data", "/nonexistent/data.csv"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stderr_error(&out)["code"], "IO_NOT_FOUND");
}

#[test]
fn config_errors_are_exit_1() {
    let cases: Vec<(Vec<String>, &str)> = vec![
        (vec!["estimate".into(), "--model".into(), "bogus".into(), "--inline".into(), "1".into()], "INVALID_CONFIG"),
        (vec!["estimate".into(), "--inline".into(), "1".into()], "CONFIG_MISSING_MODEL"),
        (vec!["estimate".into(), "--model".into(), "location".into()], "CONFIG_NO_DATA"),
        (
            vec!["estimate".into(), "--model".into(), "location".into(), "--data".into(), path(&fixture("malformed.csv")).into()],
            "DATA_PARSE",
        ),
        (
            vec!["estimate".into(), "--config".into(), path(&fixture("unknown_key.toml")).into(), "--inline".into(), "1".into()],
            "CONFIG_PARSE",
        ),
        (vec!["estimate".into(), "--model".into(), "location".into(), "--inline".into(), "1,2".into(), "--weights".into(), "1".into()], "CONFIG_INVALID"),
        (vec!["estimate".into(), "--model".into(), "location".into(), "--inline".into(), "1".into(), "--weights".into(), "0".into()], "INVALID_WEIGHTS"),
        (vec!["estimate".into(), "--bogus-flag".into()], "CONFIG_USAGE"),
    ];
    for (args, expected) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = psi(&args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert_eq!(stderr_error(&out)["code"], expected, "{args:?}");
    }
}

#[test]
fn solver_failure_is_exit_2() {
    // every observation sits at m, so psi < 0 on the whole ray
    let out = psi(&["estimate", "--model", "normal_variance", "--param", "m=2", "--data", path(&fixture("degenerate.csv"))]);
    assert_eq!(code(&out), 2);
    assert_eq!(stderr_error(&out)["code"], "BRACKET_NOT_FOUND");
}

#[test]
fn representation_tables_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = psi(&["representation", "--config", path(&fixture("representation.toml")), "--out-dir", path(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let env = fs::read_to_string(dir.path().join("envelope.csv")).unwrap();
    let mut lines = env.lines();
    assert_eq!(lines.next(), Some("t,q_lower,q_upper,gap"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 512);
    assert!(rows.iter().all(|r| r[3] >= 0.0 && r[1] <= r[2]));

    let weight = fs::read_to_string(dir.path().join("weight.csv")).unwrap();
    let p: Vec<f64> = weight.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(p.windows(2).all(|w| w[1] >= w[0]), "p is monotone for this family");

    for i in 0..5 {
        let loss = fs::read_to_string(dir.path().join(format!("loss_{i:03}.csv"))).unwrap();
        assert!(loss.starts_with("t,rho_star\n"));
        let rho: Vec<f64> = loss.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert!(rho.iter().all(|v| *v >= -1e-12));
    }

    let s: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(s["argmin"]["agree"], true);
    assert!((s["argmin"]["estimate"].as_f64().unwrap() - 1.694).abs() < 1e-9);
    assert_eq!(s["reference"]["p_within_envelope_bounds"], true);
    assert!(s["envelope"]["max_gap"].as_f64().unwrap() > 0.0);
    assert!(s["losses"].as_array().unwrap().iter().all(|l| l["product_check"] == "pass"));
}

#[test]
fn representation_inline_family_without_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = psi(&[
        "representation",
        "--model",
        "normal_variance",
        "--family",
        path(&fixture("family.csv")),
        "--grid",
        "0.6,3.9,64",
        "--out-dir",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let s: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(s["loss_source"], "family");
    // the extreme members sit outside the grid span
    let skipped = s["losses"].as_array().unwrap().iter().filter(|l| l["skipped"].is_string()).count();
    assert_eq!(skipped, 2);
    assert_eq!(s["tau"], 2.25);
}

#[test]
fn representation_richness_violation_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = psi(&["representation", "--config", path(&fixture("richness.toml")), "--out-dir", path(dir.path())]);
    assert_eq!(code(&out), 2);
    let e = stderr_error(&out);
    assert_eq!(e["code"], "RICHNESS_VIOLATED");
    assert_eq!(e["t"], 0.25);
}

#[test]
fn representation_grid_outside_theta_is_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = psi(&["representation", "--config", path(&fixture("grid_out_of_theta.toml")), "--out-dir", path(dir.path())]);
    assert_eq!(code(&out), 1);
    assert_eq!(stderr_error(&out)["code"], "CONFIG_GRID_OUT_OF_THETA");
    let out = psi(&[
        "representation", "--config", path(&fixture("richness.toml")), "--grid", "0.6,3.9,16", "--tau", "9",
        "--out-dir", path(dir.path()),
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stderr_error(&out)["code"], "TAU_OUTSIDE_GRID");
}

#[test]
fn diagnose_normal_variance_passes() {
    let out = psi(&["diagnose", "--config", path(&fixture("diagnose_normal_variance.toml"))]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["verdict"] == "pass"));
    for c in checks {
        for key in ["name", "verdict", "witness", "tolerance_used"] {
            assert!(c.get(key).is_some());
        }
    }
    // 5 observations with distinct theta1: every pair is compared
    assert_eq!(checks.iter().filter(|c| c["name"].as_str().unwrap().starts_with("comparison_monotone")).count(), 10);
}

#[test]
fn diagnose_counterexample_is_exit_3_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = psi(&["diagnose", "--config", path(&fixture("counterexample.toml")), "--out", path(&out_path)]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["verdict"] == "fail").collect();
    assert!(!failed.is_empty());
    let cmp = failed.iter().find(|c| c["name"] == "comparison_monotone[0,1]").expect("comparison fails");
    let pts = cmp["witness"]["points"].as_array().unwrap();
    // re-evaluate the witness: r(t) = -psi(0, t) / psi(1, t)
    let psi1 = |x: f64, t: f64| (x - t) * (2.0 * x * (20.0 * t).sin()).exp();
    let r = |t: f64| -psi1(0.0, t) / psi1(1.0, t);
    let (t0, v0) = (pts[0]["t"].as_f64().unwrap(), pts[0]["value"].as_f64().unwrap());
    let (t1, v1) = (pts[1]["t"].as_f64().unwrap(), pts[1]["value"].as_f64().unwrap());
    assert!(t0 < t1);
    assert!((r(t0) - v0).abs() <= 1e-15 * v0.abs() && (r(t1) - v1).abs() <= 1e-15 * v1.abs());
    assert!(v1 < v0);
    assert!(failed.iter().any(|c| c["name"].as_str().unwrap().starts_with("weighted_estimator")));
}

#[test]
fn diagnose_single_inline_observation() {
    let out = psi(&["diagnose", "--model", "normal_variance", "--data", path(&fixture("empty.csv")), "--inline", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let verdicts: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["verdict"].as_str().unwrap()).collect();
    assert!(verdicts.contains(&"vacuous"));
    assert!(!verdicts.contains(&"fail"));
}

#[test]
fn diagnose_explicit_pairs_and_bad_pairs() {
    let data = fixture("example_representation.csv");
    let out = psi(&["diagnose", "--model", "normal_variance", "--data", path(&data), "--pairs", "0:4,2:1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"comparison_monotone[0,4]"));
    assert!(names.contains(&"comparison_monotone[1,2]"));
    let out = psi(&["diagnose", "--model", "normal_variance", "--data", path(&data), "--pairs", "x"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_exits_zero() {
    let out = psi(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("representation"));
}
