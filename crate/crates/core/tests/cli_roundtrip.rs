//! Every certificate or witness written by the binary is accepted by the
//! matching verify subcommand.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn partreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partreg")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn columns_certificates_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let matrices = [
        "1 3\n1 1 -1\n",
        "1 4\n1 2 -3 4\n",
        "2 4\n1 -2 1 0\n0 1 -2 1\n",
        "2 5\n1 1 -1 0 0\n2 0 1 -3 0\n",
    ];
    for (i, text) in matrices.iter().enumerate() {
        let m = path(dir.path(), &format!("m{i}.mat"));
        let cert = path(dir.path(), &format!("m{i}.cert"));
        std::fs::write(&m, text).unwrap();
        let checked = report(&partreg(&["rado", "check", "--matrix", &m, "--out", &cert]));
        if checked["partition_regular"] == true {
            let verified = report(&partreg(&["rado", "verify", "--matrix", &m, "--certificate", &cert]));
            assert_eq!(verified["valid"], true, "matrix {i}");
        }
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(dir.path(), "schur.mat");
    let cert = path(dir.path(), "bad.cert");
    std::fs::write(&m, "1 3\n1 1 -1\n").unwrap();
    std::fs::write(&cert, r#"{"blocks": [[1, 2], [3]], "coefficients": [{"1": "1"}]}"#).unwrap();
    let verified = report(&partreg(&["rado", "verify", "--matrix", &m, "--certificate", &cert]));
    assert_eq!(verified["valid"], false);
}

#[test]
fn witness_colorings_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(dir.path(), "ap3.mat");
    let col = path(dir.path(), "ap3.col");
    std::fs::write(&m, "1 3\n1 -2 1\n").unwrap();
    let found = report(&partreg(&[
        "rado", "empirical", "--matrix", &m, "--colors", "2", "--horizon", "8", "--out", &col,
    ]));
    assert_eq!(found["verdict"], "witness");
    assert_eq!(found["witness"]["assignment"], serde_json::json!([0, 0, 1, 1, 0, 0, 1, 1]));
    let verified = report(&partreg(&["rado", "verify-coloring", "--matrix", &m, "--coloring", &col]));
    assert_eq!(verified["avoids_monochromatic_solutions"], true);
    assert_eq!(verified["options"]["nontrivial"], true);

    let forced = report(&partreg(&["rado", "empirical", "--matrix", &m, "--colors", "2", "--horizon", "9"]));
    assert_eq!(forced["verdict"], "forced");
}

#[test]
fn cst_witnesses_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.json");
    let found = report(&partreg(&[
        "cst", "search", "--set", "evens:200", "--spec", "const:2", "--spec", "arith:2,2", "--depth", "3", "--out", &w,
    ]));
    assert_eq!(found["verdict"], "found");
    let verified = report(&partreg(&[
        "cst", "verify", "--set", "evens:200", "--spec", "const:2", "--spec", "arith:2,2", "--witness", &w,
    ]));
    assert_eq!(verified["valid"], true);
    let narrower = report(&partreg(&[
        "cst", "verify", "--set", "evens:10", "--spec", "const:2", "--spec", "arith:2,2", "--witness", &w,
    ]));
    assert_eq!(narrower["valid"], false);
}

#[test]
fn strauss_set_files_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let s = path(dir.path(), "strauss.txt");
    let made = report(&partreg(&["dyn", "strauss", "--epsilon", "1/2", "--horizon", "8", "--out", &s]));
    assert_eq!(made["size"], 5);
    let gaps = report(&partreg(&["dyn", "gaps", "--set", &format!("file:{s}")]));
    assert_eq!(gaps["max_gap"], 2);
    let density = report(&partreg(&["dyn", "density", "--set", &s, "--window", "8"]));
    assert_eq!(density["density"]["estimate"], "5/8");
}

#[test]
fn exit_statuses() {
    let absent = partreg(&["cst", "search", "--set", "odds:999", "--spec", "const:1", "--depth", "2"]);
    assert_eq!(absent.status.code(), Some(0));
    assert_eq!(report(&absent)["verdict"], "proven_absent");
    let budget = partreg(&["cst", "search", "--set", "odds:999", "--spec", "const:1", "--depth", "2", "--budget", "10"]);
    assert_eq!(budget.status.code(), Some(2));
    let input = partreg(&["mpc", "find", "--set", "missing.txt", "--m", "1", "--p", "1", "--c", "1", "--bound", "5"]);
    assert_eq!(input.status.code(), Some(1));
    let usage = partreg(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(1));
}
