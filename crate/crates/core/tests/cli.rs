//! End-to-end runs of the `oplip` binary.

use std::path::Path;
use std::process::{Command, Output};

use oplip::harness::{from_csv, CSV_HEADER};

fn oplip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oplip")).args(args).output().unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn np_ratio_writes_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = oplip(&[
        "np-ratio", "--dim", "16", "--trials", "10", "--function", "abs", "--seed", "1", "--out",
        out.to_str().unwrap(), "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&out);
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    let rows = from_csv(&text).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.lhs >= 0.0 && r.rhs >= 0.0 && r.dim == 16));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    for p in [&a, &b] {
        let o = oplip(&[
            "perturb-ratio", "--dim", "12", "--trials", "5", "--seed", "21", "--function", "piecewise",
            "--format", "jsonl", "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read(&a).lines().count(), 5);
}

#[test]
fn identity_check_passes() {
    let o = oplip(&["identity-check", "--dim", "40", "--trials", "200", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 1 + 200 * 3);
}

#[test]
fn usage_errors() {
    let o = oplip(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = oplip(&["np-ratio", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(oplip(&["launch"]).status.code(), Some(2));
    assert_eq!(oplip(&["np-ratio", "--format", "xml", "--trials", "1"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# pinned run\ndim = 6\ntrials = 4\nseed = 9\nfunction = sin\n").unwrap();
    let o = oplip(&["np-ratio", "--config", cfg.to_str().unwrap(), "--trials", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = from_csv(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.dim == 6 && r.seed == 9 && r.function == "sin"));
}

#[test]
fn breached_ceiling_exits_1() {
    let o = oplip(&["fp-scaling", "--dim", "8", "--trials", "2", "--tol", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("check failed"));
}
