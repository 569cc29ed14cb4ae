//! Command-line contract: exit codes, output formats, determinism and replay.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

use semidw::cli::{run_from, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VIOLATION};
use semidw::gen::Instance;
use semidw::linalg::real_diag;
use semidw::metric::{build_metric, DEFAULT_RANK_TOL};
use semidw::suite::{Check, Replay};
use semidw::Operator;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semidw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_from(std::iter::once("semidw").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_semidw");
    let ok = Command::new(bin).args(["compute", "--metric", &data("diag12.json"), "--operator", &data("x.json"), "--samples", "2000"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.contains("0.5"), "{text}");
    let missing = Command::new(bin).args(["compute", "--metric", "/nonexistent.json", "--operator", &data("x.json")]).output().unwrap();
    assert_eq!(missing.status.code(), Some(EXIT_PARSE));
    let bad_flag = Command::new(bin).args(["compute", "--bogus"]).output().unwrap();
    assert_eq!(bad_flag.status.code(), Some(EXIT_PARSE));
}

#[test]
fn operator_outside_ba_is_a_precondition_failure() {
    // A = diag(1, 0) and T = [[0, 1], [0, 0]]: T maps N(A) into range(A).
    let (code, _, err) = run(&["bounds", "--metric", &data("diag10.json"), "--operator", &data("unbounded.json")]);
    assert_eq!(code, EXIT_PRECONDITION, "{err}");
}

#[test]
fn json_output_is_deterministic() {
    let args = ["bounds", "--metric", &data("diag12.json"), "--operator", &data("x.json"), "--operator2", &data("y.json"), "--format", "json", "--samples", "5000"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(v.is_array() || v.is_object());
}

#[test]
fn csv_has_the_documented_columns() {
    let (code, out, _) = run(&["bounds", "--metric", &data("diag12.json"), "--operator", &data("x.json"), "--format", "csv", "--samples", "0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next().unwrap(), "name,anchor,kind,value,dw,gap,satisfied");
}

#[test]
fn out_flag_writes_a_file() {
    let path = scratch("remark.json");
    let p = path.to_str().unwrap();
    let (code, stdout, _) = run(&["remark-repro", "--format", "json", "--samples", "5000", "--out", p]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
}

#[test]
fn verify_and_exact_succeed_on_the_sample() {
    let (code, _, err) = run(&["verify", "--metric", &data("diag12.json"), "--operator", &data("x.json"), "--samples", "5000"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, out, err) = run(&["exact", "--metric", &data("identity2.json"), "--operator", &data("x.json"), "--samples", "5000", "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(serde_json::from_str::<serde_json::Value>(&out).is_ok());
}

#[test]
fn small_suite_run_is_deterministic() {
    let dir = scratch("failures");
    let args = ["suite", "--suite", "cardano", "--suite", "equality", "--format", "json", "--samples", "5000", "--failures-dir", dir.to_str().unwrap()];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let (code, _, _) = run(&["suite", "--suite", "no-such-suite"]);
    assert_eq!(code, EXIT_PARSE);
}

fn write_replay(name: &str, t: &Operator) -> PathBuf {
    let m = build_metric(real_diag(&[1.0, 2.0]), DEFAULT_RANK_TOL).unwrap();
    let replay = Replay { check: Check::Nilpotent, instance: Some(Instance::new(42, 0, &m, t, None)), params: BTreeMap::new(), seed: 42, samples: 5000 };
    let path = scratch(name);
    std::fs::write(&path, serde_json::to_string(&replay).unwrap()).unwrap();
    path
}

#[test]
fn replay_round_trip_and_violation_exit() {
    let good = write_replay("good.json", &Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]));
    let args = ["suite", "--replay", good.to_str().unwrap(), "--format", "json"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);

    // The identity is not of nilpotent type, so the check reports a violation.
    let bad = write_replay("bad.json", &Operator::identity(2));
    let (code, out, err) = run(&["suite", "--replay", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_VIOLATION, "{out}{err}");
    assert!(out.contains("violation"), "{out}");
}
