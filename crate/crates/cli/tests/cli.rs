use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rank3ribbon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn ring_reports_galois_type_and_dimensions() {
    let v = json_stdout(&["ring", "--params", "0,1,0,1"]);
    assert_eq!(v["galois"], "Trivial");
    assert_eq!(v["dims"], serde_json::json!([1, 1, 2]));
    assert_eq!(v["global_fp_dim"], 6);
    assert_eq!(v["axioms"]["associativity"], true);
    let z3 = json_stdout(&["ring", "--z3"]);
    assert_eq!(z3["params"], Value::Null);
}

#[test]
fn enumerate_lists_canonical_solutions() {
    let v = json_stdout(&["enumerate", "--bound", "1"]);
    assert_eq!(v["count"], 3);
    assert_eq!(v["raw_count"], 6);
    assert_eq!(v["solutions"], serde_json::json!([[0, 1, 0, 0], [0, 1, 0, 1], [1, 1, 0, 1]]));
}

#[test]
fn classify_writes_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&["classify", "--bound", "20", "--max-twist-order", "60", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    let admissible = v["admissible"].as_array().unwrap();
    assert_eq!(admissible.len(), 4);
    assert!(v["header"]["limitation"].as_str().unwrap().contains("exactly 7"));
    let c3 = v["rings"].as_array().unwrap().iter().find(|r| r["params"] == serde_json::json!([1, 1, 0, 1])).unwrap();
    assert_eq!(c3["alias"], serde_json::json!(["K(1,1,1,0)"]));
    assert_eq!(c3["galois"], "C3");
    assert_eq!(c3["verdicts"]["nonmodular"]["label"], "conditional on cited result");
}

#[test]
fn classify_table_states_the_limitation() {
    let out = run(&["classify", "--bound", "2", "--format", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("NOT REPRODUCED"));
    assert!(text.contains("admissible: K(Rep(Z/3)), K(0,1,0,0), K(0,1,0,1), K(1,1,0,1)"));
}

#[test]
fn search_finds_nothing_for_n_two() {
    let v = json_stdout(&["search", "--params", "0,1,0,2", "--max-twist-order", "60"]);
    assert_eq!(v["count"], 0);
    let v = json_stdout(&["search", "--params", "0,1,0,0", "--max-twist-order", "16"]);
    assert_eq!(v["count"], 16);
}

#[test]
fn audits() {
    let out = run(&["audit", "case3b-grid", "--smax", "50", "--tmax", "50"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "true");
    assert_eq!(json_stdout(&["audit", "landau", "--classes", "3"])["bound"], 6);
    assert_eq!(json_stdout(&["audit", "star-assoc", "--bound", "4"])["agrees"], true);
    assert_eq!(json_stdout(&["audit", "rank3-rings", "--coeff-bound", "1"])["matches"], true);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["ring", "--params", "1,2,3"][..],
        &["ring", "--bogus"],
        &["classify", "--bound", "0"],
        &["search", "--params", "0,1,0,0", "--tol", "-1"],
        &["audit", "landau", "--classes", "0"],
        &["ring", "--params", "0,1,0,1", "--format", "table"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn computation_errors_are_structured() {
    let out = run(&["ring", "--params", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "star_violation");
    assert!(err["error"]["detail"].as_str().unwrap().contains("K(1,1,1,1)"));

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.json");
    let out = run(&["enumerate", "--bound", "1", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
}
