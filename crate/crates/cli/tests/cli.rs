// Copyright 2026 The dqlayout Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::process::{Command, Output};

fn dqlayout(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqlayout"))
        .args(args)
        .env_remove("DQLAYOUT_QUBIT_CAP")
        .output()
        .expect("binary runs")
}

const GHZ_PARTITION: &str = r#"{
  "partitions": [["q0-q1"], ["q2-q3"], ["q4-q5"]],
  "assignment": ["Q0", "Q1", "Q2"],
  "backends": {"Q0": "FakeVigoV2", "Q1": "FakeAthensV2", "Q2": "FakeLagosV2"}
}"#;

#[test]
fn compile_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let part = dir.path().join("p.json");
    fs::write(&part, GHZ_PARTITION).unwrap();
    let out = dir.path().join("run");
    let o = dqlayout(&[
        "compile", "--bench", "ghz:6", "--partition", part.to_str().unwrap(), "--shots", "2000", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["layout.json", "layout.qasm", "metrics.json", "report.txt"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let metrics: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("metrics.json")).unwrap()).unwrap();
    assert_eq!(metrics["n_comm"], 4);

    let r = dqlayout(&["report", "--in", out.to_str().unwrap()]);
    assert!(r.status.success());
    assert_eq!(String::from_utf8_lossy(&r.stdout).lines().count(), 2);
}

#[test]
fn qasm_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let qasm = dir.path().join("bell.qasm");
    fs::write(
        &qasm,
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q -> c;\n",
    )
    .unwrap();
    let o = dqlayout(&[
        "compile", "--circuit", qasm.to_str().unwrap(), "--groups", "q0|q1", "--assign", "Q0,Q1", "--shots", "1000",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("bell"));
}

#[test]
fn overlapping_partition_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let part = dir.path().join("p.json");
    fs::write(&part, r#"{"partitions": [["q0-q3"], ["q3-q5"]], "assignment": ["Q0", "Q1"]}"#).unwrap();
    let o = dqlayout(&["compile", "--bench", "ghz:6", "--partition", part.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("partition"));
}

#[test]
fn bad_qasm_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let qasm = dir.path().join("bad.qasm");
    fs::write(&qasm, "OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n").unwrap();
    let o = dqlayout(&["compile", "--circuit", qasm.to_str().unwrap(), "--groups", "q0|q1", "--assign", "Q0,Q1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:"));
}

#[test]
fn capacity_violation_is_a_compile_error() {
    // eight data qubits do not fit a five-qubit device
    let o = dqlayout(&["compile", "--bench", "ghz:9", "--groups", "q0-q7|q8", "--assign", "Q0,Q1", "--simulate", "never"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn refused_simulation_exits_four() {
    let o = dqlayout(&[
        "compile", "--bench", "qaoa:6", "--groups", "q0-q1|q2-q3|q4-q5", "--assign", "Q0,Q1,Q2", "--simulate", "always",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn qubit_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dqlayout"))
        .args(["compile", "--bench", "ghz:6", "--groups", "q0-q1|q2-q3|q4-q5", "--assign", "Q0,Q1,Q2"])
        .env("DQLAYOUT_QUBIT_CAP", "8")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("exceeds qubit cap"));
}

#[test]
fn strict_mode_rejects_crowded_device() {
    // Q1 holds two data and two comm qubits: fits five slots in either mode
    let ok = dqlayout(&[
        "compile", "--bench", "ghz:6", "--groups", "q0-q1|q2-q3|q4-q5", "--assign", "Q0,Q1,Q2", "--mode", "strict",
        "--simulate", "never",
    ]);
    assert!(ok.status.success());
    // four data plus two comm qubits on a five-qubit device
    let crowded = dqlayout(&[
        "compile", "--bench", "ghz:12", "--groups", "q0-q3|q4-q7|q8-q11", "--assign", "Q0,Q1,Q2", "--mode", "strict",
        "--simulate", "never",
    ]);
    assert_eq!(crowded.status.code(), Some(3));
}
