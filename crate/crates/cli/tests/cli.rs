//! Exit-code and scenario-validation contract of the binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_naplt"))
}

fn run_scenario(doc: &str) -> (i32, String) {
    let dir = std::env::temp_dir();
    let path = dir.join(format!(
        "naplt-cli-test-{}-{doc_hash}.json",
        std::process::id(),
        doc_hash = doc.len()
    ));
    std::fs::write(&path, doc).unwrap();
    let out = bin()
        .args(["run", path.to_str().unwrap(), "--out"])
        .arg(dir.join("naplt-cli-test-out.json"))
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

const P1: &str = r#"{
  "base": {"n": 1},
  "alpha": "1",
  "flag_ideals": [{"name": "a", "terms": [{"lambda": 0, "gens": [[1]]}], "lambda_max": 1}],
  "requests": [{"kind": "energy", "flag": "a"}]
}"#;

#[test]
fn valid_scenario_exits_zero() {
    let (code, _) = run_scenario(P1);
    assert_eq!(code, 0);
}

#[test]
fn unsupported_dimension_exits_two() {
    let (code, err) = run_scenario(&P1.replace("\"n\": 1", "\"n\": 4"));
    assert_eq!(code, 2);
    assert!(err.contains("out of supported range"), "stderr: {err}");
}

#[test]
fn parse_error_exits_two_with_position() {
    let (code, err) = run_scenario("{\"base\": {\"n\": 1}\n  oops");
    assert_eq!(code, 2);
    assert!(err.contains("line"), "stderr: {err}");
}

#[test]
fn unknown_flag_name_exits_two() {
    let (code, err) = run_scenario(&P1.replace("\"flag\": \"a\"", "\"flag\": \"b\""));
    assert_eq!(code, 2);
    assert!(err.contains("unknown flag ideal"), "stderr: {err}");
}

#[test]
fn empty_requests_exit_two() {
    let (code, err) = run_scenario(&P1.replace(r#"[{"kind": "energy", "flag": "a"}]"#, "[]"));
    assert_eq!(code, 2);
    assert!(err.contains("at least one request"), "stderr: {err}");
}

#[test]
fn demos_parse_and_run() {
    for which in ["p1", "p2"] {
        let out = bin().args(["demo", which]).output().unwrap();
        assert!(out.status.success());
        let doc = String::from_utf8(out.stdout).unwrap();
        let (code, err) = run_scenario(&doc);
        assert_eq!(code, 0, "demo {which}: {err}");
    }
}

#[test]
fn eval_request_round_trips() {
    let doc = P1.replace(
        r#"{"kind": "energy", "flag": "a"}"#,
        r#"{"kind": "eval", "flag": "a", "weight": ["1/2"]}"#,
    );
    let dir = std::env::temp_dir();
    let scenario = dir.join(format!("naplt-eval-test-{}.json", std::process::id()));
    let report = dir.join(format!("naplt-eval-report-{}.json", std::process::id()));
    std::fs::write(&scenario, doc).unwrap();
    let status = bin()
        .args(["run", scenario.to_str().unwrap(), "--out", report.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let out: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    // sigma(v_{1/2})((z) + (1)t) = min(1/2, 1) and phi = -that
    assert_eq!(out["results"][0]["gauss_value"], "1/2");
    assert_eq!(out["results"][0]["potential"], "-1/2");
    assert_eq!(out["results"][0]["log_discrepancy"], "3/2");
    std::fs::remove_file(&scenario).ok();
    std::fs::remove_file(&report).ok();
}
