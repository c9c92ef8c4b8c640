//! End-to-end tests of the compiled binary: exit codes, output formats, and
//! determinism across runs.

use std::path::Path;
use std::process::{Command, Output};

use omegalim::report::Report;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_omegalim")
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.olc");
    std::fs::write(&path, text).expect("config written");
    path
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn examples_command_exits_zero_and_reports_every_scenario() {
    let out = run_cli(&["examples"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).expect("utf-8");
    assert_eq!(text.matches(": PASS").count(), 10, "{text}");
    assert!(text.contains("exit: 0"));
}

#[test]
fn delta_command_reports_visit_sets() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(
        dir.path(),
        "space nat\nmap shift(1)\npartition { finite{0,1}, ap(2,2), finite{3} | ap(5,2) }\npoints 0",
    );
    let out = run_cli(&["delta", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("visit-set"), "{text}");
    assert!(text.contains("[1, 2]"), "{text}");
}

#[test]
fn check_failure_exits_one() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(
        dir.path(),
        "space nat\nchain explicit { partition { ap(0,2), ap(1,2) }; partition { all } }",
    );
    let out = run_cli(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("chain_monotone: FAIL"), "{text}");
}

#[test]
fn syntax_error_exits_two() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(dir.path(), "space nat\nmap shift(");
    let out = run_cli(&["delta", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn unreadable_config_exits_two() {
    let out = run_cli(&["delta", "--config", "/nonexistent/config.olc"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn semantic_error_exits_three() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(dir.path(), "space nat\npartition { ap(0,2), ap(4,1) }");
    let out = run_cli(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("witness element 4"), "{err}");
}

#[test]
fn command_config_mismatch_exits_three() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(dir.path(), "space nat\nmap shift(1)\npoints 0");
    let out = run_cli(&["threads", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("chain"), "{err}");
}

#[test]
fn machine_output_parses_and_is_stable() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(
        dir.path(),
        "space nat\nmap shift(1)\nchain builtin initial_segments depth 6\npoints 0\nformat machine",
    );
    let args = ["verify", "--config", config.to_str().unwrap()];
    let first = run_cli(&args);
    let second = run_cli(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(
        first.stdout, second.stdout,
        "machine output must be byte-stable"
    );
    let report = Report::from_machine(&String::from_utf8(first.stdout).unwrap()).expect("parses");
    assert_eq!(report.command, "verify");
    assert!(report.checks.iter().all(|c| c.passed));
}

#[test]
fn point_and_depth_flags_override_config() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(
        dir.path(),
        "space nat\nmap shift(1)\nchain builtin initial_segments depth 10\npoints 0\nformat machine",
    );
    let out = run_cli(&[
        "intersect",
        "--config",
        config.to_str().unwrap(),
        "--point",
        "0",
        "--depth",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_machine(&String::from_utf8(out.stdout).unwrap()).expect("parses");
    match &report.items[0] {
        omegalim::report::ReportItem::Intersection {
            minima, verdict, ..
        } => {
            assert_eq!(minima.len(), 5);
            assert!(verdict.contains("empty in the limit"), "{verdict}");
        }
        other => panic!("unexpected item {other:?}"),
    }
}

#[test]
fn build_thread_over_explicit_poset_extends() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = write_config(
        dir.path(),
        "space finite(4)\nmap table[1, 2, 3, 0]\nchain explicit {\n  partition { all };\n  partition { finite{0,1}, finite{2,3} };\n  partition { finite{0,2}, finite{1,3} };\n  partition { finite{0}, finite{1}, finite{2}, finite{3} }\n} poset { 0 <= 1, 0 <= 2, 1 <= 3, 2 <= 3 }\npoints 0\nformat machine",
    );
    let out = run_cli(&["build-thread", "--config", config.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = Report::from_machine(&String::from_utf8(out.stdout).unwrap()).expect("parses");
    match &report.items[0] {
        omegalim::report::ReportItem::ExtendedThread {
            cofinal_chain,
            thread,
            ..
        } => {
            assert_eq!(cofinal_chain, &vec!["3".to_string()]);
            assert_eq!(thread.entries.len(), 4);
        }
        other => panic!("unexpected item {other:?}"),
    }
}
