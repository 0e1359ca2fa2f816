use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use graphrec::binmatrix::{parse_matrix, serialize_matrix, MatrixFormat, SparseBinaryMatrix};
use graphrec::oracle::{derive_k33_dual, verify_realization};
use graphrec::spqr::GraphTreePair;
use serde_json::Value;

fn graphrec() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_graphrec"));
    c.env_remove("GRAPHREC_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    graphrec().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = graphrec().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn nine_column() -> SparseBinaryMatrix {
    let rows = vec![
        vec![0, 1, 3],
        vec![0, 1, 2, 3],
        vec![0, 1, 2, 4],
        vec![0, 1, 2, 5],
        vec![0, 1, 2, 6, 7, 8],
        vec![3],
    ];
    SparseBinaryMatrix::from_rows(9, rows).unwrap()
}

fn write(dir: &Path, name: &str, m: &SparseBinaryMatrix, f: MatrixFormat) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serialize_matrix(m, f)).unwrap();
    p
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "nine_column.mtx", &nine_column(), MatrixFormat::Coordinate);
    let bad = write(dir.path(), "k33.mtx", &derive_k33_dual(), MatrixFormat::Coordinate);
    assert_eq!(run(&["check", good.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(run(&["check", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["check", dir.path().join("missing.mtx").to_str().unwrap()]).status.code(), Some(2));
    let garbage = dir.path().join("garbage.mtx");
    std::fs::write(&garbage, "2 2 1\n5 1\n").unwrap();
    let out = run(&["check", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn check_json_certificate_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let m = nine_column();
    let p = write(dir.path(), "nine_column.rows", &m, MatrixFormat::RowList);
    let out = run(&["check", p.to_str().unwrap(), "--format", "row-list", "--json", "--certificate"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["graphic"], true);
    assert_eq!(v["rows"], 6);
    assert_eq!(v["trace"].as_array().unwrap().len(), 6);
    let g: GraphTreePair = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert!(verify_realization(&m, &g));
}

#[test]
fn rejected_row_is_named() {
    let m = derive_k33_dual();
    let out = run_stdin(&["check", "-", "--json"], &serialize_matrix(&m, MatrixFormat::Coordinate));
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["graphic"], false);
    let r = v["first_rejected"].as_u64().unwrap() as usize;
    assert_eq!(v["first_rejected_label"], format!("r{}", r + 1));
    assert!(graphrec::is_graphic(&m.select_rows(&(0..r).collect::<Vec<_>>())).graphic);
    assert!(!graphrec::is_graphic(&m.select_rows(&(0..=r).collect::<Vec<_>>())).graphic);
}

#[test]
fn maximal_with_verification() {
    let out = run_stdin(&["maximal", "-", "--format", "dense", "--json", "--verify"], &serialize_matrix(&derive_k33_dual(), MatrixFormat::Dense));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert!(!v["skipped"].as_array().unwrap().is_empty());
}

#[test]
fn dump_spqr_as_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "nine_column.mtx", &nine_column(), MatrixFormat::Coordinate);
    let js = dir.path().join("tree.json");
    let dot = dir.path().join("tree.dot");
    assert!(run(&["check", p.to_str().unwrap(), "--dump-spqr", js.to_str().unwrap()]).status.success());
    assert!(run(&["check", p.to_str().unwrap(), "--dump-spqr", dot.to_str().unwrap()]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(js).unwrap()).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 7);
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("graph spqr {"));
}

#[test]
fn gen_is_deterministic_and_graphic() {
    let a = run(&["gen", "--seed", "9", "--vertices", "7", "--edges", "12"]);
    let b = run(&["gen", "--seed", "9", "--vertices", "7", "--edges", "12"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let m = parse_matrix(&String::from_utf8(a.stdout).unwrap(), MatrixFormat::Coordinate).unwrap();
    assert_eq!((m.num_rows(), m.num_cols()), (6, 6));
    assert!(graphrec::is_graphic(&m).graphic);
    let c = graphrec().args(["gen", "--seed", "0", "--vertices", "7", "--edges", "12"]).env("GRAPHREC_SEED", "9").output().unwrap();
    assert_eq!(c.stdout, b.stdout);
}

#[test]
fn gen_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--seed", "3", "--vertices", "5", "--edges", "8", "--count", "3", "--format", "dense", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    for s in 3..6 {
        let text = std::fs::read_to_string(dir.path().join(format!("graphic-{s}.dense"))).unwrap();
        assert!(graphrec::is_graphic(&parse_matrix(&text, MatrixFormat::Dense).unwrap()).graphic);
    }
}

#[test]
fn gen_rejects_impossible_shapes() {
    let out = run(&["gen", "--vertices", "4", "--edges", "7", "--simple"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
    assert_eq!(run(&["gen", "--vertices", "5", "--edges", "2"]).status.code(), Some(2));
}

#[test]
fn oracle_check_modes() {
    let dir = tempfile::tempdir().unwrap();
    for (name, m, graphic) in [("nine_column.mtx", nine_column(), true), ("k33.mtx", derive_k33_dual(), false)] {
        let p = write(dir.path(), name, &m, MatrixFormat::Coordinate);
        let out = run(&["oracle-check", p.to_str().unwrap(), "--json"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["graphic"], graphic);
        assert_eq!(v["oracle_graphic"], graphic);
    }
    let out = run(&["oracle-check", "--random", "60", "--seed", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["agreed"], 60);
    assert_eq!(v["by_construction"], 15);
    assert_eq!(run(&["oracle-check", "--random", "5", "--max-rows", "9"]).status.code(), Some(2));
    assert_eq!(run(&["oracle-check"]).status.code(), Some(2));
}

#[test]
fn bad_seed_variable() {
    let out = graphrec().args(["gen", "--vertices", "3", "--edges", "3"]).env("GRAPHREC_SEED", "abc").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
