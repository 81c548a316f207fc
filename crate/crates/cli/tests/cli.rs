use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn routesim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_routesim"))
        .args(args)
        .env_remove("ROUTESIM_OUTPUT_DIR")
        .output()
        .expect("spawn routesim")
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().next().unwrap()).unwrap()
}

#[test]
fn eval_sita_balances_load_at_sqrt_r() {
    let out = routesim(&["eval", "--policy", "sita", "--alpha", "1", "--r", "100", "--lambda", "0.005", "--s", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let l1 = v["station1"]["load"].as_f64().unwrap();
    let l2 = v["station2"]["load"].as_f64().unwrap();
    assert!((l1 - l2).abs() < 1e-12);
    assert!((v["total_wait"].as_f64().unwrap() - 0.0418085143623697).abs() < 1e-12);
}

#[test]
fn eval_tags_at_r_sends_nothing_onward() {
    let out = routesim(&["eval", "--policy", "tags", "--alpha", "1.2", "--r", "50", "--lambda", "0.01", "--s", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["fraction_to_2"].as_f64().unwrap(), 0.0);
    assert_eq!(v["station2"]["load"].as_f64().unwrap(), 0.0);
}

#[test]
fn infeasible_eval_exits_3_and_names_the_server() {
    let out = routesim(&["eval", "--policy", "sita", "--alpha", "1", "--r", "100", "--lambda", "0.3", "--s", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["feasible"], Value::Bool(false));
    assert!(String::from_utf8_lossy(&out.stderr).contains("server 2"));
}

#[test]
fn infeasible_optimize_exits_3() {
    let out = routesim(&["optimize", "--policy", "tags", "--alpha", "1", "--r", "100", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn optimize_reports_search_and_evaluation() {
    let out = routesim(&["optimize", "--policy", "sita", "--alpha", "1", "--r", "100", "--lambda", "0.005"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let s = v["search"]["optimal_threshold"].as_f64().unwrap();
    assert!((s - 10.0).abs() < 1e-3, "{s}");
    assert_eq!(v["search"]["optimal_value"], v["evaluation"]["total_wait"]);
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(routesim(&["eval", "--policy", "fifo"]).status.code(), Some(2));
    let out = routesim(&["eval", "--policy", "sita", "--alpha", "1", "--r", "0.5", "--lambda", "0.1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = routesim(&["eval", "--policy", "sita", "--alpha", "1", "--r", "100", "--lambda", "0.01", "--s", "200"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_with_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_routesim"))
        .args([
            "sweep", "--alpha", "0.8,1.2", "--lambda", "0.001", "--r-min", "10", "--r-max", "100", "--points", "5",
            "--output", "ratio.csv", "--plot-script", "ratio.gp",
        ])
        .env("ROUTESIM_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("ratio.csv")).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], routesim_core::sweep::CSV_COLUMNS.join(","));
    assert_eq!(lines.len(), 1 + 2 * 5);
    assert!(lines[1].starts_with("10,0.001,0.8,"));
    let gp = fs::read_to_string(dir.path().join("ratio.gp")).unwrap();
    assert!(gp.contains("ratio.csv"));
}

#[test]
fn sweep_reads_toml_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.toml");
    let target = dir.path().join("from_config.csv");
    fs::write(
        &config,
        format!(
            "alpha_values = [1.0]\nlambda_values = [0.002, 0.004]\noutput_path = {:?}\n\n[r_grid]\nmin = 10.0\nmax = 100.0\npoints = 3\n",
            target.display().to_string()
        ),
    )
    .unwrap();
    let out = routesim(&["sweep", "--config", config.to_str().unwrap(), "--points", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&target).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 4);
}

#[test]
fn sweep_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "alpha_values = []\n").unwrap();
    let out = routesim(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_bounds_empty_grid_exits_0() {
    let out = routesim(&["verify-bounds"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 point(s) checked"));
}

#[test]
fn verify_bounds_reports_failing_lower_bound() {
    let out = routesim(&["verify-bounds", "--r", "100,1000", "--lambda-over-r", "0.5"]);
    assert_eq!(out.status.code(), Some(4));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\n100,0.005,0.5,"));
    assert!(text.contains("2 point(s) checked"));
}

#[test]
fn verify_bounds_skips_points_outside_hypothesis() {
    let out = routesim(&["verify-bounds", "--r", "100", "--lambda", "0.02"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("skip"));
}

#[test]
fn simulate_is_deterministic_and_compares() {
    let args = [
        "simulate", "--policy", "tags", "--alpha", "1", "--r", "100", "--lambda", "0.005", "--s", "10",
        "--jobs", "50000", "--seed", "11", "--compare-analytic",
    ];
    let a = routesim(&args);
    let b = routesim(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert!(v["analytic_wait"].as_f64().unwrap() > 0.0);
    assert!(v["discrepancy_halfwidths"].as_f64().unwrap().is_finite());
    assert_eq!(v["result"]["jobs_measured"].as_u64(), Some(45_000));
}

#[test]
fn simulate_writes_csv_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let out = routesim(&[
        "simulate", "--policy", "sita", "--alpha", "1", "--r", "100", "--lambda", "0.005", "--s", "10",
        "--jobs", "20000", "--replications", "3", "--csv", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(path).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("sita,1,100,0.005,10,0,20000,"));
}
