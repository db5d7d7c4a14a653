use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weil-verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn passing_suite_exits_zero() {
    let out = run(&["--suite", "gauss", "--p", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["p"], 7);
    let s = &v["suites"][0];
    assert_eq!(s["suite"], "gauss");
    assert_eq!((s["total"].as_u64(), s["failed"].as_u64()), (Some(2), Some(0)));
    assert!(s["witnesses"].as_array().unwrap().is_empty());
    assert!(v.get("duration_ms").is_none());
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(run(&["--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["--p", "13"]).status.code(), Some(2));
    assert_eq!(run(&["--p", "5", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "xml"]).status.code(), Some(2));
}

#[test]
fn failing_suite_exits_one_with_witnesses() {
    let out = run(&["--suite", "dft"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let s = &v["suites"][0];
    assert_eq!(s["failed"], 2);
    let w = s["witnesses"].as_array().unwrap();
    assert_eq!(w.len(), 2);
    assert_eq!(w[0]["witness"]["matches_psi_minus_b"], true);
}

#[test]
fn csv_has_one_row_per_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&[
        "--suite",
        "kernel-mult",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,check_id,status,witness"));
    assert_eq!(lines.filter(|l| l.ends_with(",pass,")).count(), 512);
}

#[test]
fn character_table_csv() {
    let out = run(&["--suite", "character-table", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "representative,class_size,trace,prediction,match");
    assert_eq!(lines.len(), 8);
    // the identity class is non-generic
    assert!(lines.iter().any(|l| l.starts_with("\"[[1,0],[0,1]]\",1,") && l.ends_with("n/a,n/a")));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["--suite", "invariant-kernel", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_changes_sampled_checks() {
    let a = run(&["--suite", "kernel-mult", "--p", "5", "--seed", "1"]);
    let b = run(&["--suite", "kernel-mult", "--p", "5", "--seed", "2"]);
    assert_eq!(json(&a)["suites"][0]["total"], 500);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn coherence_records() {
    let out = run(&["--suite", "coherence"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let reports = &v["suites"][0]["observations"]["reports"];
    assert_eq!(reports[0]["n"], 4);
    assert_eq!(reports[0]["catalan"], 5);
    assert_eq!(reports[0]["relations"], serde_json::json!([[2, 3]]));
    assert_eq!(reports[2]["verdict"], "C=id");
}

#[test]
fn timing_is_opt_in() {
    let out = run(&["--suite", "gauss", "--timing"]);
    assert!(json(&out).get("duration_ms").is_some());
}
