use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const SCALAR: &str = r#"
ell = 5
b = 1
r = 1
q = [6]
n_max = 3
cache_dir = "cache"

[[f]]
exponents = [0]
matrix = [1]

[[f]]
exponents = [1]
matrix = [1]
"#;

const GENERAL: &str = r#"
ell = 3
b = 2
r = 1
q = [4, 0, 3, 4]
n_max = 3
cache_dir = "cache"

[[f]]
exponents = [0, 0]
matrix = [1]

[[f]]
exponents = [3, 1]
matrix = [1]
"#;

const TEN: &str = r#"
ell = 3
b = 2
r = 1
q = [10, 0, 0, 10]
n_max = 1

[[f]]
exponents = [0, 0]
matrix = [1]

[[f]]
exponents = [3, 1]
matrix = [1]
"#;

fn towerlim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_towerlim"))
        .args(args)
        .env_remove("TOWERLIM_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn ok(args: &[&str]) -> Value {
    let out = towerlim(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json(&out)
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn arnold_fibonacci() {
    let v = ok(&["arnold", "--matrix", "1,1;1,0", "--ell", "3", "--n", "1"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["trace_low"], "4");
    assert_eq!(v["result"]["trace_high"], "76");
}

#[test]
fn zeta_motivating_closed_form() {
    let v = ok(&["zeta", "motivating", "--n", "3"]);
    assert_eq!(v["status"], "pass");
    let expected: Vec<Value> = ["1", "-2", "15", "-20", "75", "-50", "125"]
        .iter()
        .map(|s| Value::from(*s))
        .collect();
    assert_eq!(v["result"]["weil_polynomial"], Value::Array(expected.clone()));
    assert_eq!(v["result"]["closed_form"], Value::Array(expected));
}

#[test]
fn zeta_character_families() {
    let v = ok(&["zeta", "fermat", "--ell", "3", "--n", "1", "--p", "7"]);
    assert_eq!(v["result"]["weil_polynomial"], serde_json::json!(["1", "1", "7"]));
    assert_eq!(v["result"]["counts"][0]["enumeration"], 9);
    assert_eq!(v["result"]["counts"][0]["characters"], 9);
    let v = ok(&["zeta", "as", "--ell", "3", "--n", "1", "--p", "7"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["genus"], 6);
    assert!(v["result"]["from_counts"].is_array());
}

#[test]
fn zeta_field_cap_is_a_guard() {
    let out = towerlim(&["zeta", "as", "--ell", "3", "--n", "1", "--p", "7", "--m-max", "4", "--field-cap", "1000"]);
    assert_eq!(out.status.code(), Some(4));
    let out = towerlim(&["zeta", "motivating", "--n", "4", "--field-cap", "1000"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn coleman_sums() {
    let v = ok(&["coleman", "jacobi", "--ell", "3", "--n", "1", "--p", "7", "--pairs", "1,1;2,2"]);
    assert_eq!(v["status"], "pass");
    let v = ok(&["coleman", "gauss", "--ell", "3", "--n", "1", "--p", "7"]);
    assert_eq!(v["result"]["verdict"], "resolved");
    assert_eq!(v["result"]["convention"], "inverse");
    assert_eq!(v["result"]["sign"], 1);
    let out = towerlim(&["coleman", "gauss", "--ell", "3", "--n", "1", "--p", "7", "--v", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn converge_scalar_and_general() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_config(dir.path(), "scalar.toml", SCALAR);
    let v = ok(&["converge", "--config", s.to_str().unwrap(), "--mode", "scalar"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["levels"].as_array().unwrap().len(), 3);
    assert!(v["result"]["levels"][2]["congruence"].is_null());

    let g = write_config(dir.path(), "general.toml", GENERAL);
    let v = ok(&["converge", "--config", g.to_str().unwrap()]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["n0"], 1);
    assert_eq!(v["result"]["levels"][0]["congruence"]["measured"]["Finite"], 3);
    assert_eq!(v["result"]["levels"][1]["congruence"]["measured"]["Finite"], 6);

    let out = towerlim(&["converge", "--config", g.to_str().unwrap(), "--mode", "scalar"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn warm_cache_is_byte_identical_and_corruption_recovers() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_config(dir.path(), "general.toml", GENERAL);
    let args = ["converge", "--config", g.to_str().unwrap()];
    let cold = ok(&args);
    let sources = |v: &Value| -> Vec<String> {
        v["timings"]["levels"]
            .as_array()
            .unwrap()
            .iter()
            .map(|l| l["source"].as_str().unwrap().to_string())
            .collect()
    };
    assert_eq!(sources(&cold), ["computed"; 3]);
    let warm = ok(&args);
    assert_eq!(sources(&warm), ["cache"; 3]);
    let a = serde_json::to_vec(&without_timings(cold.clone())).unwrap();
    let b = serde_json::to_vec(&without_timings(warm)).unwrap();
    assert_eq!(a, b);

    let cache = dir.path().join("cache");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&cache)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert_eq!(files.len(), 3);
    std::fs::write(&files[1], b"{\"truncated").unwrap();
    let repaired = ok(&args);
    assert_eq!(sources(&repaired), ["cache", "computed", "cache"]);
    assert_eq!(
        serde_json::to_vec(&without_timings(repaired)).unwrap(),
        serde_json::to_vec(&without_timings(cold)).unwrap()
    );
    assert_eq!(sources(&ok(&args)), ["cache"; 3]);
}

#[test]
fn below_threshold_is_not_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_config(dir.path(), "ten.toml", TEN);
    let v = ok(&["converge", "--config", t.to_str().unwrap(), "--mode", "scalar", "--n-max", "2"]);
    assert_eq!(v["result"]["n0"], 2);
    assert_eq!(v["result"]["levels"][0]["congruence"]["status"], "below-threshold");
    assert_eq!(v["status"], "below-threshold");
}

#[test]
fn out_file_and_status_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = towerlim(&["arnold", "--matrix", "2,1;1,1", "--ell", "5", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "arnold: pass");
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "arnold");
}

#[test]
fn invalid_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.toml", &GENERAL.replace("q = [4, 0, 3, 4]", "q = [4, 0, 3]"));
    let out = towerlim(&["converge", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("field `q`"));

    let missing = dir.path().join("nope.toml");
    assert_eq!(towerlim(&["converge", "--config", missing.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(towerlim(&["arnold", "--matrix", "1,x", "--ell", "3", "--n", "1"]).status.code(), Some(3));
    assert_eq!(towerlim(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(towerlim(&["arnold", "--ell", "3"]).status.code(), Some(3));
    assert_eq!(towerlim(&["--help"]).status.code(), Some(0));
    assert_eq!(towerlim(&["--version"]).status.code(), Some(0));
}

#[test]
fn orbit_cap_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let capped = GENERAL.replace("cache_dir = \"cache\"", "[guards]\norbit_cap = 50");
    let c = write_config(dir.path(), "capped.toml", &capped);
    let out = towerlim(&["converge", "--config", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn qsum_rows_are_measured_only() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_config(dir.path(), "general.toml", GENERAL);
    let v = ok(&["qsum", "--config", g.to_str().unwrap(), "--lambda", "1,0", "--v", "1,1", "--n-range", "1..3"]);
    assert_eq!(v["status"], "measured-only");
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["status"] == "measured-only"));
    let out = towerlim(&["qsum", "--config", g.to_str().unwrap(), "--lambda", "1,0", "--v", "1,1", "--n-range", "3..1"]);
    assert_eq!(out.status.code(), Some(3));
}
