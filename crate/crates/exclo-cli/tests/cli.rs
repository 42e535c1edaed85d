//! End-to-end runs of the installed binary: file outputs, exit codes, and
//! the round trips between the writer commands and the checker commands.

use std::path::Path;
use std::process::{Command, Output};

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exclo"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    let dir = std::env::temp_dir();
    run_in(&dir, args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

#[test]
fn graph_writes_dimacs_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["graph", "--n", "4"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let col = std::fs::read_to_string(dir.path().join("box-n4.col")).unwrap();
    assert!(col.starts_with("p edge 8 12"), "got: {}", &col[..col.len().min(40)]);
    let json = std::fs::read_to_string(dir.path().join("box-n4.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["n"], 4);
}

#[test]
fn graph_rejects_short_cycles_as_usage_errors() {
    let out = run(&["graph", "--n", "3"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error"));
}

#[test]
fn graph_accepts_an_explicit_anti_correlated_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["graph", "--n", "6", "--anti", "0,2,4"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(dir.path().join("box-n6.col").exists());
}

#[test]
fn product_writes_the_joint_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["product", "--n", "4", "--k", "2"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let col = std::fs::read_to_string(dir.path().join("joint-n4-k2.col")).unwrap();
    assert!(col.starts_with("p edge 64"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("joint-n4-k2.json")).unwrap())
            .unwrap();
    assert_eq!(meta["vertex_count"], 64);
    assert_eq!(meta["vertex_weight"], "1/4");
}

#[test]
fn product_colored_writes_layer_lists() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["product", "--n", "4", "--k", "2", "--colored"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("layers-n4-k2.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc["k"], 2);
    assert_eq!(doc["layers"].as_array().unwrap().len(), 2);
}

#[test]
fn oversized_products_fail_as_usage_with_a_hint() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_exclo"))
        .args(["product", "--n", "6", "--k", "3"])
        .env("EXCLO_VERTEX_CAP", "10")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("rule-out 3 6"), "stderr: {}", stderr(&out));
}

#[test]
fn rule_out_prints_each_kind_of_verdict() {
    let cases = [
        (&["rule-out", "4", "18"][..], 0, "NO_VIOLATION"),
        (&["rule-out", "2", "4"][..], 0, "VIOLATES"),
        (&["rule-out", "4", "10"][..], 0, "UNKNOWN"),
    ];
    for (args, want_code, want_word) in cases {
        let out = run(args);
        assert_eq!(code(&out), want_code, "args: {args:?}");
        assert!(stdout(&out).contains(want_word), "args: {args:?}, got: {}", stdout(&out));
    }
    let out = run(&["rule-out", "0", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_passes_the_activation_battery() {
    let out = run(&["verify", "T9"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(text.contains("2 passed, 0 failed, 0 skipped"));
}

#[test]
fn verify_json_reports_are_machine_readable() {
    let out = run(&["--json", "verify", "T4"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["tag"], "T4");
    let instances = doc["instances"].as_array().unwrap();
    assert_eq!(instances.len(), 7);
    assert!(instances.iter().all(|i| i["status"] == "PASS"));
}

#[test]
fn verify_rejects_unknown_tags() {
    let out = run(&["verify", "NOPE"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("T13-table"), "stderr: {}", stderr(&out));
}

#[test]
fn verify_reports_exhausted_budgets_as_skipped() {
    let out = run(&["verify", "T9", "--budget", "50"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("SKIPPED"));
}

#[test]
fn violation_certificates_round_trip_through_the_checker() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["violation", "--n", "4", "--k", "2", "--out", "cert.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("5/4"));

    let out = run_in(dir.path(), &["check-certificate", "cert.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("VALID"));

    // Any edit that changes the event set must be caught.
    let path = dir.path().join("cert.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let vertices = doc["vertices"].as_array().unwrap().len();
    doc["vertices"].as_array_mut().unwrap().pop();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), vertices - 1);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run_in(dir.path(), &["check-certificate", "cert.json"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("INVALID"), "stderr: {}", stderr(&out));
}

#[test]
fn violation_reports_none_on_a_satisfying_product() {
    let out = run(&["violation", "--n", "6", "--k", "2"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("NONE"));
}

#[test]
fn violation_exits_distinctly_when_the_budget_runs_out() {
    let out = run(&["violation", "--n", "6", "--k", "3", "--budget", "500"]);
    assert_eq!(code(&out), 3, "stderr: {}", stderr(&out));
}

#[test]
fn check_coloring_accepts_a_clean_two_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("col.json");
    // K_4 with one perfect matching in color 2: both classes bipartite.
    std::fs::write(
        &path,
        r#"{"m":4,"k":2,"edges":[[0,1,1],[0,2,1],[0,3,2],[1,2,2],[1,3,1],[2,3,1]]}"#,
    )
    .unwrap();
    let out = run_in(dir.path(), &["check-coloring", "col.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("no monochromatic odd cycle"));

    let out = run_in(dir.path(), &["check-coloring", "col.json", "--bounds", "3,3"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn check_coloring_rejects_incomplete_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    std::fs::write(&path, r#"{"m":4,"k":2,"edges":[[0,1,1]]}"#).unwrap();
    let out = run_in(dir.path(), &["check-coloring", "short.json"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("INVALID"), "stderr: {}", stderr(&out));
}

#[test]
fn check_coloring_reports_a_forced_odd_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mono.json");
    // All of K_3 in color 1: the triangle itself is the witness.
    std::fs::write(&path, r#"{"m":3,"k":1,"edges":[[0,1,1],[0,2,1],[1,2,1]]}"#).unwrap();
    let out = run_in(dir.path(), &["check-coloring", "mono.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("color 1 length 3"), "got: {}", stdout(&out));
}
