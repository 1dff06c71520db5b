use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn expgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expgap"))
        .args(args)
        .env_remove("EXPGAP_MAX_BITS")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("expgap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const E_MINUS_TWO: &str = r#"{"terms": [
  {"alpha": {"minpoly": ["-1", "1"], "box": {"re": ["1", "1"], "im": ["0", "0"]}},
   "beta":  {"minpoly": ["-1", "1"], "box": {"re": ["1", "1"], "im": ["0", "0"]}}},
  {"alpha": {"minpoly": ["0", "1"], "box": {"re": ["0", "0"], "im": ["0", "0"]}},
   "beta":  {"minpoly": ["2", "1"], "box": {"re": ["-2", "-2"], "im": ["0", "0"]}}}
]}"#;

#[test]
fn bound_a_trivial_instance() {
    let out = expgap(&["bound-a", "--m", "1", "--d", "1", "--h", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], "expgap/1");
    assert_eq!(v["intermediates"]["delta"], "1");
    assert_eq!(v["intermediates"]["zeta"], "3");
    assert!(v["magnitude"]["level"].as_u64().unwrap() >= 1);
}

#[test]
fn bound_b_degree_one_invalid() {
    let out = expgap(&["bound-b", "--m", "2", "--d", "1", "--h", "ln 3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["validity"], false);
}

#[test]
fn sign_of_e_minus_two() {
    let p = scratch("e2.json", E_MINUS_TWO);
    let out = expgap(&["sign", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["certificate"]["verdict"], "positive-real");
}

#[test]
fn malformed_input_is_exit_3() {
    let p = scratch("bad.json", "{\"terms\": [\n  {\"alpha\": }\n]}");
    let out = expgap(&["sign", "--in", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(expgap(&["bound-a", "--m", "1", "--d", "1", "--h", "ln 0"]).status.code(), Some(3));
    assert_eq!(expgap(&["bound-a", "--m", "1"]).status.code(), Some(3));
}

#[test]
fn undecided_and_resource_exit_codes() {
    let p = scratch("e2b.json", E_MINUS_TWO);
    let out = Command::new(env!("CARGO_BIN_EXE_expgap"))
        .args(["sign", "--in", p.to_str().unwrap()])
        .env("EXPGAP_MAX_BITS", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = expgap(&["min-search", "--m", "2", "--d", "1", "--h", "ln 3", "--max-enum", "3"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn output_is_deterministic() {
    let a = expgap(&["primitive", "--sqrt", "2", "--sqrt", "3"]);
    let b = expgap(&["primitive", "--sqrt", "2", "--sqrt", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["T"], "2");
    assert_eq!(v["vartheta"]["minpoly"], serde_json::json!(["1", "0", "-10", "0", "1"]));
}

#[test]
fn min_search_reports_grid_bound() {
    let out = expgap(&["min-search", "--m", "2", "--d", "1", "--h", "ln 3", "--cap-t", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["bounds"]["cited"], "grid");
    assert_eq!(v["collision"]["within_grid_bound"], true);
}

#[test]
fn sert_and_selftest() {
    let out = expgap(&["sert", "--m", "1", "--d", "1", "--h", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["kind"], "sert");
    let out = expgap(&[
        "sert", "--field-degree", "1", "--vars", "1", "--d-p", "1", "--h-alpha", "1", "--h-beta", "1",
        "--ln-disc-beta", "1", "--alpha-hat", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["magnitude"]["level"], 1);
    assert_eq!(expgap(&["selftest"]).status.code(), Some(0));
    assert_eq!(expgap(&["selftest", "--mutate-r", "370"]).status.code(), Some(1));
}
