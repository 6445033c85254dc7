//! End-to-end tests of the `adsearch` binary: argument handling, exit codes,
//! output formats, config files, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn adsearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adsearch"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("adsearch-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn tmin_csv_matches_closed_form() {
    let out = adsearch(&["tmin", "--n", "101"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,alpha,A,eps_Tmin"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "101");
    let eps_t_min: f64 = row[3].parse().unwrap();
    assert!((eps_t_min - 10.0).abs() <= 1e-5, "eps_Tmin = {eps_t_min}");
    assert_eq!(lines.next(), None);
}

#[test]
fn tmin_json_has_schema_fields() {
    let out = adsearch(&["tmin", "--n", "101", "--alpha", "0.5", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["schema"], "tmin");
    assert_eq!(doc["N"], 101);
    assert_eq!(doc["alpha"], 0.5);
    let a = doc["A"].as_f64().unwrap();
    assert!((a - (101.0f64).sqrt()).abs() <= 1e-12);
    assert!(doc["eps_Tmin"].as_f64().unwrap() > 0.0);
    assert!((doc["constant_time_asymptote"].as_f64().unwrap() - 2.5707963267948966).abs() < 1e-15);
}

#[test]
fn spectrum_output_is_deterministic() {
    let args = ["spectrum", "--n", "64", "--a", "8", "--samples", "33"];
    let a = adsearch(&args);
    let b = adsearch(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "repeated runs must be byte-identical");
    let text = stdout_str(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,f,g,E_minus,E_plus,omega,M"));
    assert_eq!(lines.count(), 33);
}

#[test]
fn scan_covers_grid_with_linear_baseline() {
    let out = adsearch(&["scan", "--n", "101,1001", "--alpha", "0,0.5"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,alpha,A,eps_Tmin");
    assert_eq!(lines.len(), 5);
    // alpha = 0 row reproduces the linear-path closed form sqrt(N-1).
    let row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(row[0], "101");
    let v: f64 = row[3].parse().unwrap();
    assert!((v - 10.0).abs() <= 1e-5, "alpha=0 eps_Tmin = {v}");
}

#[test]
fn evolve_reduced_json_summary() {
    let out = adsearch(&[
        "evolve", "--n", "64", "--eps", "0.1", "--samples", "50", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["schema"], "evolve_summary");
    assert_eq!(doc["engine"], "reduced");
    let fid = doc["final_fidelity"].as_f64().unwrap();
    assert!(fid >= 1.0 - 10.0 * 0.1 * 0.1, "fidelity = {fid}");
    let eps_t = doc["final_eps_t"].as_f64().unwrap();
    assert!((eps_t - (63.0f64).sqrt()).abs() / eps_t <= 1e-4, "eps*T = {eps_t}");
}

#[test]
fn evolve_engines_agree() {
    let common = ["--n", "32", "--eps", "0.1", "--samples", "20", "--format", "json"];
    let reduced = adsearch(&[&["evolve"], &common[..]].concat());
    let full = adsearch(&[&["evolve", "--engine", "full", "--m", "5"], &common[..]].concat());
    assert!(reduced.status.success() && full.status.success());
    let r: serde_json::Value = serde_json::from_str(&stdout_str(&reduced)).unwrap();
    let f: serde_json::Value = serde_json::from_str(&stdout_str(&full)).unwrap();
    let dr = r["min_P_minus"].as_f64().unwrap();
    let df = f["min_P_minus"].as_f64().unwrap();
    assert!((dr - df).abs() <= 1e-6, "reduced {dr} vs full {df}");
}

#[test]
fn evolve_csv_trace_shape() {
    let out = adsearch(&["evolve", "--n", "64", "--eps", "0.1", "--samples", "25"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,s,P_minus,E_minus,omega");
    assert_eq!(lines.len(), 26);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    let last: Vec<&str> = lines[25].split(',').collect();
    assert_eq!(last[1].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn audit_report_and_overlap_matrix() {
    let overlap = tmp_path("overlap.csv");
    let out = adsearch(&[
        "audit", "--n", "16", "--eps", "0.05",
        "--overlap-out", overlap.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["schema"], "audit");
    let report = &doc["report"];
    assert_eq!(report["n"], 16);
    assert_eq!(report["pass_time5"], true);
    assert_eq!(report["pass_bound"], true);
    assert!(report["oracle_action"].as_f64().unwrap() >= 1.0);

    let csv = std::fs::read_to_string(&overlap).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 17);
    assert!(lines[0].starts_with("m0,m1,"));
    // Diagonal entries are unit self-overlaps up to integration drift.
    let row0: Vec<&str> = lines[1].split(',').collect();
    assert!((row0[0].parse::<f64>().unwrap() - 1.0).abs() <= 1e-6);
    let _ = std::fs::remove_file(&overlap);
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_empty() {
    let path = tmp_path("tmin.csv");
    let out = adsearch(&["tmin", "--n", "101", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("N,alpha,A,eps_Tmin\n"));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let cfg = tmp_path("config.txt");
    std::fs::write(&cfg, "# experiment defaults\nn = 16\na = 4\n").unwrap();

    let from_config = adsearch(&["tmin", "--config", cfg.to_str().unwrap()]);
    assert!(from_config.status.success());
    let direct = adsearch(&["tmin", "--n", "16", "--a", "4"]);
    assert_eq!(from_config.stdout, direct.stdout);

    // An explicit flag overrides the config value.
    let overridden = adsearch(&["tmin", "--n", "101", "--config", cfg.to_str().unwrap()]);
    let expect = adsearch(&["tmin", "--n", "101", "--a", "4"]);
    assert_eq!(overridden.stdout, expect.stdout);
    let _ = std::fs::remove_file(&cfg);
}

#[test]
fn validation_failures_exit_2() {
    // Missing required parameter.
    let out = adsearch(&["tmin"]);
    assert_eq!(out.status.code(), Some(2));

    // Mutually exclusive coefficient flags.
    let out = adsearch(&["tmin", "--n", "16", "--a", "2", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2));

    // N below the minimum search-space size.
    let out = adsearch(&["tmin", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));

    // Gauge shift only applies to the full engine.
    let out = adsearch(&["evolve", "--n", "16", "--shift-ground"]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed config line.
    let cfg = tmp_path("bad-config.txt");
    std::fs::write(&cfg, "this line has no equals sign\n").unwrap();
    let out = adsearch(&["tmin", "--n", "16", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(&cfg);

    // Audit past the all-marked-states cap.
    let out = adsearch(&["audit", "--n", "1024"]);
    assert_eq!(out.status.code(), Some(2));
}
