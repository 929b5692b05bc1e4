use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulerian-dmod")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn verdicts(report: &Value) -> Vec<&str> {
    report["instances"].as_array().unwrap().iter().map(|i| i["verdict"].as_str().unwrap()).collect()
}

#[test]
fn derham_suite_passes_with_expected_degrees() {
    let out = run(&["verify", "--suite", "derham", "--max-n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["suite"], "derham");
    assert_eq!(verdicts(&report).len(), 6);
    assert!(verdicts(&report).iter().all(|v| *v == "pass"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"expected\":-3"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["verify", "--suite", "euler", "--max-n", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn shift_negative_test_passes() {
    let out = run(&["verify", "--suite", "euler", "--shift", "1", "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let shifts: Vec<&Value> =
        report["instances"].as_array().unwrap().iter().filter(|i| i["theorem"] == "prop-shift").collect();
    assert!(!shifts.is_empty());
    for inst in shifts {
        assert_eq!(inst["verdict"], "pass");
        assert!(inst["detail"].as_str().unwrap().contains("failure expected"));
    }
}

#[test]
fn failing_check_exits_one() {
    let out = run(&["euler-check", "--n", "2", "--module", "E", "--shift", "1,0"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(verdicts(&report), vec!["fail"]);
    assert!(report["instances"][0]["detail"].as_str().unwrap().contains("detected offset -1"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--suite", "bogus"][..],
        &["verify", "--window", "3..1"],
        &["verify", "--max-n", "40"],
        &["koszul", "--n", "2", "--module", "F"],
        &["tor-a1", "--module", "Q", "--against", "R"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_header() {
    let out = run(&["tor-a1", "--module", "E", "--against", "Rx", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("suite,instance,theorem,nu,degree,dim,verdict"));
}

#[test]
fn ext_conjecture_never_fails() {
    let out = run(&["ext-a1", "--module", "E", "--against", "E"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verdicts(&json(&out)), vec!["conjecture-evidence"]);
}

#[test]
fn tor_r_anchor() {
    let out = run(&["tor-r", "--n", "2", "--ideal-i", "x1", "--spot-i", "1", "--ideal-j", "x2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["instances"][0]["detail"], "a[l][nu] = [[1,0],[0,0],[0,0]]");
}

#[test]
fn module_json_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e2.json");
    let path = path.to_str().unwrap();
    let out = run(&["lc", "--n", "2", "--ideal", "x1^2,x2", "--index", "2", "--out", path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radical"));

    let out = run(&["koszul", "--module-json", path, "--ops", "d1,d2", "--expect", "-2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["instances"][0]["tables"], serde_json::json!({"0": {"-2": 1}}));

    let out = run(&["euler-check", "--module-json", path]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn pipeline_output_is_a_module() {
    let out = run(&["lc", "--n", "2", "--pipeline", "H1(x1);H1(x2)"]);
    assert_eq!(out.status.code(), Some(0));
    let module = json(&out);
    assert_eq!(module["n"], 2);
    assert_eq!(module["regions"].as_array().unwrap().len(), 1);
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dual.json");
    let out = run(&["verify", "--suite", "tor-a1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(verdicts(&report).len(), 12);
}

#[test]
fn weyl_arithmetic() {
    let out = run(&["weyl", "--n", "1", "--expr", "d1", "--times", "x1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "x1*d1 + 1");
    let out = run(&["weyl", "--n", "1", "--expr", "x1*d1^2", "--mod-d"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0");
}
