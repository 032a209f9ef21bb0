use std::process::Command as Proc;

use lightning::config::Command;
use lightning::{write_atomic, CliError, Format, ResultRecord};
use serde_json::{Map, Value};

fn lightning(args: &[&str]) -> std::process::Output {
    Proc::new(env!("CARGO_BIN_EXE_lightning")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Vec<Map<String, Value>> {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = lightning(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn spectral_record() {
    let rec = &json(&["spectral", "--eps", "0.1481"])[0];
    assert_eq!(rec["dim"], 28);
    assert!((rec["rho"].as_f64().unwrap() - 0.373079).abs() < 1e-5);
}

#[test]
fn saw_record() {
    let rec = &json(&["saw", "--n", "4"])[0];
    assert_eq!(rec["mu"], 100);
    assert_eq!(rec["bound"], 108);
    assert_eq!(rec["within_bound"], true);
}

#[test]
fn certify_scan_record() {
    let rec = &json(&["certify", "--grid-step", "0.01"])[0];
    assert_eq!(rec["found"], true);
    assert!((rec["eps0"].as_f64().unwrap() - 0.14).abs() < 1e-12);
}

#[test]
fn sweep_has_one_record_per_grid_point() {
    let recs = json(&["sweep", "--eps-grid", "0.05:0.95:0.05", "--r", "10", "--trials", "50", "--seed", "7"]);
    assert_eq!(recs.len(), 19);
    assert!((recs[18]["eps"].as_f64().unwrap() - 0.95).abs() < 1e-12);
}

#[test]
fn coupled_sweep_is_monotone() {
    let recs =
        json(&["sweep", "--eps-grid", "0.1:0.9:0.1", "--r", "15", "--trials", "300", "--seed", "3", "--coupled"]);
    for key in ["weak_successes", "strong_successes", "attracting_successes"] {
        let counts: Vec<u64> = recs.iter().map(|r| r[key].as_u64().unwrap()).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{key}: {counts:?}");
    }
}

#[test]
fn psi_verify_record() {
    let rec = &json(&["psi-verify", "--eps", "0.5", "--n", "20", "--trials", "20", "--edge-trials", "20000"])[0];
    assert_eq!(rec["central_bidirectional"], 20);
    assert_eq!(rec["properties_hold"], true);
}

#[test]
fn cluster_count_record() {
    let rec = &json(&["cluster-count", "--eps", "1", "--m", "1", "--n", "3", "--r", "6"])[0];
    assert_eq!(rec["count"], 1);
    let rec = &json(&["cluster-count", "--eps", "0.5", "--m", "1", "--n", "3", "--r", "20", "--auto"])[0];
    assert_eq!(rec["stabilized"], true);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    std::fs::write(&cfg, r#"{"command": "simulate", "eps": 0.3, "r": 8, "trials": 40, "seed": 5, "format": "json"}"#)
        .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file: Vec<Map<String, Value>> = serde_json::from_slice(&lightning(&["--config", cfg]).stdout).unwrap();
    assert_eq!(from_file[0]["eps"], 0.3);
    assert_eq!(from_file[0]["trials"], 40);
    let flagged: Vec<Map<String, Value>> =
        serde_json::from_slice(&lightning(&["--config", cfg, "--eps", "0.6"]).stdout).unwrap();
    assert_eq!(flagged[0]["eps"], 0.6);
    assert_eq!(flagged[0]["seed"], 5);
}

#[test]
fn validation_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"command": "simulate", "epsilonn": 0.3}"#).unwrap();
    let out = lightning(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilonn"));
    assert_eq!(lightning(&["sweep", "--eps-grid", "0.5:0.1:0.1", "--r", "5", "--trials", "3"]).status.code(), Some(2));
    assert_eq!(lightning(&["simulate", "--eps", "0.5"]).status.code(), Some(2));
    assert_eq!(lightning(&["bogus"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    // An enclosure narrower than rounding allows cannot be reached.
    let out = lightning(&["spectral", "--eps", "0.2", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_is_deterministic_and_thread_independent() {
    let run = |threads: &str| {
        lightning(&["simulate", "--eps", "0.45", "--r", "30", "--trials", "300", "--seed", "2", "--threads", threads])
            .stdout
    };
    let one = run("1");
    assert!(one.starts_with(b"schema,command,record,seed,"));
    assert_eq!(one, run("1"));
    assert_eq!(one, run("3"));
}

fn record(i: u64) -> ResultRecord {
    ResultRecord::new(Command::Saw, None).param("n", i).metric("mu", i)
}

#[test]
fn failed_run_leaves_target_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.csv");
    std::fs::write(&target, "previous contents\n").unwrap();
    let records = vec![Ok(record(1)), Ok(record(2)), Err(CliError::validation("injected")), Ok(record(3))];
    assert!(write_atomic(&target, Format::Csv, records).is_err());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), "previous contents\n");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let fresh = dir.path().join("fresh.json");
    assert!(write_atomic(&fresh, Format::Json, vec![Ok(record(1)), Err(CliError::validation("injected"))]).is_err());
    assert!(!fresh.exists());

    write_atomic(&fresh, Format::Json, vec![Ok(record(1)), Ok(record(2))]).unwrap();
    let parsed: Vec<Map<String, Value>> = serde_json::from_slice(&std::fs::read(&fresh).unwrap()).unwrap();
    assert_eq!(parsed.len(), 2);
}
