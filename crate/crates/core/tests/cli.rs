use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn superpv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superpv")).args(args).output().expect("binary runs")
}

fn path_arg(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn records(out: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn run_matches_golden_report() {
    let out = superpv(&["run", &path_arg("delta_1_1.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let golden = std::fs::read_to_string(fixture("delta_1_1.jsonl")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn parallel_output_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("serial.jsonl");
    let b = dir.path().join("parallel.jsonl");
    let cfg = path_arg("delta_1_1.toml");
    assert_eq!(superpv(&["run", &cfg, "--out", a.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(superpv(&["run", &cfg, "--out", b.to_str().unwrap(), "--parallel"]).status.code(), Some(0));
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn records_have_the_documented_shape() {
    let out = superpv(&["run", &path_arg("explicit_lie.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out.stdout);
    assert_eq!(recs.len(), 2);
    for (i, r) in recs.iter().enumerate() {
        assert_eq!(r["index"], i);
        assert_eq!(r["verdict"], "pass");
        assert_eq!(r["inputs_hash"].as_str().unwrap().len(), 64);
        assert!(r["witness"].is_object());
    }
    assert_eq!(recs[0]["task"], "check");
    assert_eq!(recs[1]["task"], "bosonize_verify");
}

#[test]
fn failed_verdict_exits_one() {
    let out = superpv(&["run", &path_arg("failing_verdict.toml")]);
    assert_eq!(out.status.code(), Some(1));
    let recs = records(&out.stdout);
    assert_eq!(recs[0]["verdict"], "fail");
    assert_eq!(recs[0]["witness"]["outcome"], "not_found");
}

#[test]
fn task_error_exits_two_with_a_record() {
    let out = superpv(&["run", &path_arg("task_error.toml")]);
    assert_eq!(out.status.code(), Some(2));
    let recs = records(&out.stdout);
    assert_eq!(recs[0]["verdict"], "error");
    assert!(recs[0]["witness"]["error"].as_str().unwrap().contains("series solving"));
}

#[test]
fn parse_error_reports_line_and_column() {
    let out = superpv(&["run", &path_arg("bad_expression.toml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 10, column 14"), "{err}");
}

#[test]
fn undeclared_name_is_a_validation_error() {
    let out = superpv(&["run", &path_arg("undeclared.toml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("undeclared generator `e`"));
}

#[test]
fn toml_syntax_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("broken.toml");
    std::fs::write(&cfg, "[ring\nbody = [\"t\"]\n").unwrap();
    let out = superpv(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 1"));
}

#[test]
fn missing_file_exits_two() {
    let out = superpv(&["run", "/nonexistent/problem.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_task_list_is_a_silent_success() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    std::fs::write(&cfg, "[ring]\nbody = [\"t\"]\n\n[lie]\npreset = \"d\"\n").unwrap();
    let out = superpv(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn output_path_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.jsonl");
    let src = std::fs::read_to_string(fixture("explicit_lie.toml")).unwrap();
    let cfg = dir.path().join("p.toml");
    std::fs::write(&cfg, format!("output = {:?}\n{src}", report.to_str().unwrap())).unwrap();
    let out = superpv(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(report).unwrap().lines().count(), 2);
}

#[test]
fn verify_runs_only_the_checks() {
    let out = superpv(&["verify", &path_arg("delta_1_1.toml"), "--samples", "10", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out.stdout);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["task"], "check");
    assert_eq!(recs[0]["verdict"], "pass");
}

#[test]
fn solve_writes_the_truncated_solution() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("sol.jsonl");
    let out = superpv(&["solve", &path_arg("delta_1_1.toml"), "--order", "4", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&std::fs::read(report).unwrap());
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["task"], "solve");
    assert_eq!(recs[0]["witness"]["trusted"], "t^3");
    assert_eq!(recs[0]["witness"]["solution"]["matrix"]["format"], "1|1");
}

#[test]
fn solve_rejects_unsupported_rings() {
    let out = superpv(&["solve", &path_arg("explicit_lie.toml"), "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
}
