//! End-to-end tests of the binary: flag handling, exit codes, and the
//! stability guarantees of the emitted formats.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tesphere"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

#[test]
fn solve_reproduces_te_benchmark_row() {
    let out = run(&[
        "solve", "--mode", "te", "--l", "1", "--N", "30", "--R", "1", "--n", "16", "--count",
        "4", "--k-max", "4.5", "--format", "csv",
    ]);
    assert!(out.status.success());
    let body = stdout(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "mode,l,N,index,k,tau,multiplicity");
    let expect = [
        1.460855902076010,
        2.309270674683548,
        3.141592653589792,
        4.028312376370695,
    ];
    for (line, want) in lines.zip(expect) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], "te");
        assert_eq!(fields[6], "3"); // multiplicity 2l+1
        let k: f64 = fields[4].parse().unwrap();
        assert!((k - want).abs() < 1e-9, "{k} vs {want}");
    }
}

#[test]
fn solve_rejects_l_zero() {
    let out = run(&[
        "solve", "--mode", "te", "--l", "0", "--N", "10", "--n", "16", "--k-max", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("l must be >= 1"));
}

#[test]
fn mixed_contrast_exits_3() {
    let out = run(&[
        "solve", "--mode", "te", "--l", "1", "--N", "10", "--n", "0.5,1", "--k-max", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("contrast"));
}

#[test]
fn oracle_rejects_tm() {
    let out = run(&["oracle", "--mode", "tm", "--l", "1", "--n", "16", "--k-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("oracle covers TE only"));
}

#[test]
fn oracle_rejects_polynomial_index() {
    let out = run(&["oracle", "--l", "1", "--n", "8,0,4", "--k-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("oracle requires constant n"));
}

#[test]
fn oracle_reports_small_diff() {
    let out = run(&[
        "oracle", "--l", "1", "--n", "16", "--N", "20", "--k-max", "2.0", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["count_matches"].as_bool().unwrap());
    assert!(v["max_abs_diff"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn unknown_table_id_is_usage_error() {
    let out = run(&["table", "--id", "7.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown table id"));
}

#[test]
fn converge_requires_larger_reference() {
    let out = run(&[
        "converge", "--mode", "te", "--l", "1", "--n", "16", "--N-list", "10,15,60", "--ref-N",
        "60", "--k-max", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("strictly larger"));
}

#[test]
fn converge_errors_decrease() {
    let out = run(&[
        "converge", "--mode", "te", "--l", "1", "--n", "16", "--N-list", "8,12,16", "--ref-N",
        "30", "--k-max", "2", "--count", "1", "--format", "csv",
    ]);
    assert!(out.status.success());
    let body = stdout(&out);
    let errs: Vec<f64> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(errs.len(), 3);
    assert!(errs[0] >= errs[1] && errs[1] >= errs[2]);
    // the floor keeps zeros plottable
    assert!(errs.iter().all(|&e| e >= 1e-16));
}

#[test]
fn csv_round_trips_at_17_digits() {
    let out = run(&[
        "solve", "--mode", "tm", "--l", "1", "--N", "12", "--n", "16", "--count", "2",
        "--k-max", "4", "--format", "csv",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        for field in line.split(',').skip(4).take(2) {
            let value: f64 = field.parse().unwrap();
            assert_eq!(format!("{value:.16e}"), field, "field does not round-trip");
        }
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "solve", "--mode", "te", "--l", "1-2", "--N", "12", "--n", "16", "--count", "2",
        "--k-max", "3", "--format", "csv",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_records_carry_expected_keys() {
    let out = run(&[
        "solve", "--mode", "te", "--l", "1", "--N", "10", "--n", "16", "--count", "1",
        "--k-max", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let record = &v.as_array().unwrap()[0];
    for key in ["mode", "l", "N", "index", "k", "tau", "multiplicity"] {
        assert!(record.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(record["multiplicity"], 3);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join("tesphere-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("solve.csv");
    let args_file = [
        "solve", "--mode", "te", "--l", "1", "--N", "10", "--n", "16", "--count", "1",
        "--k-max", "2", "--format", "csv",
    ];
    let to_stdout = run(&args_file);
    let mut with_out: Vec<String> = args_file.iter().map(|s| s.to_string()).collect();
    with_out.push("--out".into());
    with_out.push(path.to_str().unwrap().into());
    let refs: Vec<&str> = with_out.iter().map(|s| s.as_str()).collect();
    let to_file = run(&refs);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, to_stdout.stdout);
    std::fs::remove_file(&path).ok();
}

#[test]
fn table_61_matches_published_values() {
    let out = run(&["table", "--id", "6.1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["max_abs_diff_converged"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
}
