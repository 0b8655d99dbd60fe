use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const E2: &str = r#"{"d": 2, "field": "rational", "vectors": {
    "1,2": ["1","0"], "1,3": ["0","1"], "2,3": ["1","0"],
    "1,4": ["1","0"], "2,4": ["0","1"], "3,4": ["0","1"]}}"#;

fn s2det(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_s2det"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn compute_e2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "e2.json", E2);
    let out = s2det(&["compute", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["det"], "-1");
    assert_eq!(v["nonzero"], true);
    for t in 1..=4 {
        let out = s2det(&["compute", "--input", &input, "--omit", &t.to_string()]);
        assert_eq!(json(&out)["det"], "-1");
    }
}

#[test]
fn missing_slot_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", &E2.replace(r#", "3,4": ["0","1"]"#, ""));
    let out = s2det(&["compute", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"3,4\""), "{err}");
}

#[test]
fn input_errors_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("{not json", "malformed JSON"),
        (&E2.replace(r#""2,4": ["0","1"]"#, r#""2,4": ["0"]"#) as &str, "2,4"),
        (&E2.replace("\"d\": 2", "\"d\": 3"), "missing edge key"),
        (&E2.replace("\"rational\"", "{\"prime\": 32001}"), "32001"),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let input = write(dir.path(), &format!("c{i}.json"), text);
        let out = s2det(&["compute", "--input", &input]);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "case {i}: {err}");
    }
    assert_eq!(s2det(&["compute"]).status.code(), Some(2));
    assert_eq!(s2det(&["ed", "--d", "2", "--prime", "15"]).status.code(), Some(2));
}

#[test]
fn ed_over_prime_field() {
    let out = s2det(&["ed", "--d", "3", "--prime", "32003"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nonzero"], true);
    assert_eq!(v["instance"]["field"]["prime"], 32003);
}

#[test]
fn partition_check_and_survey() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = write(
        dir.path(),
        "g.json",
        r#"{"d": 2, "colors": {"1,2":1,"1,3":2,"2,3":1,"1,4":1,"2,4":2,"3,4":2}}"#,
    );
    let v = json(&s2det(&["partition", "check", "--input", &gamma]));
    assert_eq!(v["cycle_free"], true);
    assert_eq!(v["homogeneous"], true);
    assert_eq!(v["agrees"], true);

    let cyclic = write(
        dir.path(),
        "c.json",
        r#"{"d": 2, "colors": {"1,2":1,"1,3":1,"2,3":1,"1,4":2,"2,4":2,"3,4":2}}"#,
    );
    let v = json(&s2det(&["partition", "check", "--input", &cyclic, "--prime", "32003"]));
    assert_eq!(v["cycle_free"], false);
    assert_eq!(v["det"], "0");
    assert_eq!(v["agrees"], true);

    let args = ["partition", "survey", "--d", "3", "--samples", "2000", "--seed", "7", "--prime", "32003"];
    let a = s2det(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, s2det(&args).stdout);
    let v = json(&a);
    assert_eq!(v["table"]["cycle_free_det_zero"], 0);
    assert_eq!(v["table"]["cyclic_det_nonzero"], 0);

    let ex = s2det(&["partition", "survey", "--d", "2", "--prime", "32003", "--exhaustive"]);
    assert_eq!(json(&ex)["table"]["cycle_free_det_nonzero"], 12);
    let refused = s2det(&["partition", "survey", "--d", "3", "--prime", "32003", "--exhaustive"]);
    assert_eq!(refused.status.code(), Some(2));
}

#[test]
fn geom_witness() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(
        dir.path(),
        "p.json",
        r#"{"d": 2, "points": [["0","0"],["2","1"],["2","1"],["-1","3"]]}"#,
    );
    let out = s2det(&["geom", "--points", &pts]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["det"], "0");
    assert_eq!(v["case"], "II");
    assert_eq!(v["witness"].as_object().unwrap().len(), 6);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--d", "3", "--trials", "1000", "--seed", "7", "--prime", "32003"];
    let a = s2det(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(json(&a)["passed"], true);
    assert_eq!(a.stdout, s2det(&args).stdout);

    let q = s2det(&["verify", "--d", "2", "--trials", "50", "--seed", "1"]);
    let v = json(&q);
    assert_eq!(q.status.code(), Some(0));
    assert!(v["suites"].as_array().unwrap().iter().any(|s| s["name"] == "flip_antisymmetry"));
}

#[test]
fn oracle_check_matches_committed_golden() {
    let out = s2det(&["oracle", "regen", "--golden", "../core/golden/golden.json", "--check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["matches"], true);

    let dir = tempfile::tempdir().unwrap();
    let stale = write(
        dir.path(),
        "g.json",
        r#"{"generated_by":"x","det_s2_ed":{},"method":{},"d2_cycle_free_count":0}"#,
    );
    assert_eq!(s2det(&["oracle", "regen", "--golden", &stale, "--check"]).status.code(), Some(1));
    let fresh = dir.path().join("new.json");
    let fresh = fresh.to_str().unwrap();
    assert_eq!(s2det(&["oracle", "regen", "--golden", fresh]).status.code(), Some(0));
    assert_eq!(s2det(&["oracle", "regen", "--golden", fresh, "--check"]).status.code(), Some(0));
}

#[test]
fn matrix_dump_and_output_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "e2.json", E2);
    let v = json(&s2det(&["matrix", "dump", "--input", &input]));
    assert_eq!(v["rows"], 8);
    assert_eq!(v["cols"], 6);
    let v = json(&s2det(&["matrix", "dump", "--input", &input, "--which", "mk", "--k", "2"]));
    assert_eq!(v["entries"][0], serde_json::json!(["1", "0", "-1", "0", "0", "0"]));
    assert_eq!(s2det(&["matrix", "dump", "--input", &input, "--which", "at"]).status.code(), Some(2));

    let out_path = dir.path().join("report.json");
    let out = s2det(&["compute", "--input", &input, "--output", out_path.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(v["det"], "-1");
}
