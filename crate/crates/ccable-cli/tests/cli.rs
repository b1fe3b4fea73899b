//! Behavioral tests of the command-line interface: exit codes, report
//! content, file outputs, input documents.

use std::path::Path;
use std::process::{Command, Output};

fn ccable(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccable"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn check_ccable_pentagon_exits_zero() {
    let out = ccable(&["check", "--edges", "6,4,3,5,4"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("unique"));
    assert!(text.contains("(3,2,1,1,4)"));
}

#[test]
fn check_infeasible_triangle_exits_one_and_names_the_inequality() {
    let out = ccable(&["check", "--edges", "6,2,2"]);
    assert_eq!(exit_code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("infeasible"));
    assert!(text.contains("needs 4 > 6"));
}

#[test]
fn check_single_side_is_a_usage_error() {
    let out = ccable(&["check", "--edges", "4"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("two sides"));
}

#[test]
fn check_json_format() {
    let out = ccable(&["check", "--edges", "6,4,3,5,4", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["solutions"], serde_json::json!([[3, 2, 1, 1, 4]]));
}

#[test]
fn enumerate_counts() {
    let octagon = ccable(&["enumerate", "--edges", "4,3,4,3,4,3,4,3"]);
    assert_eq!(exit_code(&octagon), 0);
    assert_eq!(stdout(&octagon).matches("  s = (").count(), 6);

    let limited = ccable(&["enumerate", "--edges", "4,3,4,3,4,3,4,3", "--limit", "2"]);
    assert_eq!(stdout(&limited).matches("  s = (").count(), 2);

    let pentagon = ccable(&["enumerate", "--edges", "6,4,3,5,4"]);
    assert_eq!(stdout(&pentagon).matches("  s = (").count(), 1);

    let infeasible = ccable(&["enumerate", "--edges", "6,2,2"]);
    assert_eq!(exit_code(&infeasible), 1);
    assert_eq!(stdout(&infeasible).matches("  s = (").count(), 0);
}

#[test]
fn mesh_writes_the_pentagon_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("p.obj");
    let out = ccable(&["mesh", "--edges", "6,4,3,5,4", "--out", obj.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 37);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 25);
}

#[test]
fn mesh_pick_validation() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("o.obj");
    let ok = ccable(&[
        "mesh",
        "--edges",
        "4,3,4,3,4,3,4,3",
        "--pick",
        "2,3",
        "--out",
        obj.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&ok), 0, "{}", stderr(&ok));

    let bad = ccable(&[
        "mesh",
        "--edges",
        "4,3,4,3,4,3,4,3",
        "--pick",
        "3,1",
        "--out",
        obj.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&bad), 2);
    let message = stderr(&bad);
    assert!(message.contains("(0, 3)"), "{message}");
    assert!(message.contains("(0, 4)"), "{message}");

    // Picks are family-only.
    let unique = ccable(&[
        "mesh",
        "--edges",
        "6,4,3,5,4",
        "--pick",
        "1,1",
        "--out",
        obj.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&unique), 2);
}

#[test]
fn mesh_default_pick_is_the_smallest() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.obj");
    let b = dir.path().join("b.obj");
    let default_run = ccable(&[
        "mesh",
        "--edges",
        "4,3,4,3,4,3,4,3",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&default_run), 0);
    let picked = ccable(&[
        "mesh",
        "--edges",
        "4,3,4,3,4,3,4,3",
        "--pick",
        "1,1",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&picked), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn mesh_infeasible_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("x.obj");
    let out = ccable(&["mesh", "--edges", "6,2,2", "--out", obj.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(!obj.exists());
}

fn write_input(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn input_documents_drive_the_commands() {
    let dir = tempfile::tempdir().unwrap();
    let minimal = write_input(
        dir.path(),
        "minimal.json",
        r#"{"n": 5, "edges": [6, 4, 3, 5, 4]}"#,
    );
    let out = ccable(&["check", "--input", &minimal]);
    assert_eq!(exit_code(&out), 0);

    let picked = write_input(
        dir.path(),
        "picked.json",
        r#"{"edges": [4, 3, 4, 3, 4, 3, 4, 3], "pick": [2, 2]}"#,
    );
    let obj = dir.path().join("picked.obj");
    let meshed = ccable(&["mesh", "--input", &picked, "--out", obj.to_str().unwrap()]);
    assert_eq!(exit_code(&meshed), 0, "{}", stderr(&meshed));
    let text = std::fs::read_to_string(&obj).unwrap();
    assert!(text.starts_with("# patch n=8 edges=4,3,4,3,4,3,4,3 s=2,2,1,2,2,2,1,2"));

    let nonstrict_doc = write_input(
        dir.path(),
        "nonstrict.json",
        r#"{"edges": [4, 2, 2], "mode": "non-strict"}"#,
    );
    let lax = ccable(&["check", "--input", &nonstrict_doc]);
    assert_eq!(exit_code(&lax), 0);
    assert!(stdout(&lax).contains("boundary"));

    let broken = write_input(
        dir.path(),
        "broken.json",
        r#"{"edges": [1, 1, 1],
            "boundary": [[[0.0,0.0],[1.0,0.0]],
                         [[1.0,0.0],[0.5,1.0],[0.6,1.0]],
                         [[0.6,1.0],[0.0,0.0]]]}"#,
    );
    let bad = ccable(&["check", "--input", &broken, "--non-strict"]);
    assert_eq!(exit_code(&bad), 2);
    assert!(stderr(&bad).contains("side 1"));
}

#[test]
fn edges_and_input_are_mutually_exclusive() {
    let dir = tempfile::tempdir().unwrap();
    let minimal = write_input(dir.path(), "m.json", r#"{"edges": [2, 2, 2]}"#);
    let both = ccable(&["check", "--edges", "2,2,2", "--input", &minimal]);
    assert_eq!(exit_code(&both), 2);
    let neither = ccable(&["check"]);
    assert_eq!(exit_code(&neither), 2);
}

#[test]
fn check_handles_side_counts_beyond_the_closed_forms() {
    let nine = ccable(&["check", "--edges", "2,2,2,2,2,2,2,2,2"]);
    assert_eq!(exit_code(&nine), 0, "{}", stderr(&nine));
    assert!(stdout(&nine).contains("(1,1,1,1,1,1,1,1,1)"));
}

#[test]
fn oracle_command() {
    let found = ccable(&["oracle", "--edges", "6,4,3,5,4"]);
    assert_eq!(exit_code(&found), 0);
    assert!(stdout(&found).contains("solutions=1"));
    assert!(stdout(&found).contains("(3,2,1,1,4)"));

    let none = ccable(&["oracle", "--edges", "6,2,2"]);
    assert_eq!(exit_code(&none), 1);

    let starved = ccable(&["oracle", "--edges", "4,3,4,3,4,3,4,3", "--budget", "5"]);
    assert_eq!(exit_code(&starved), 2);
    assert!(stderr(&starved).contains("budget"));
}

#[test]
fn scan_verifications() {
    let oracle = ccable(&[
        "scan", "--n", "5", "--min", "2", "--max", "4", "--verify", "oracle",
    ]);
    assert_eq!(exit_code(&oracle), 0, "{}", stderr(&oracle));
    assert!(stdout(&oracle).contains("mismatches=0"));

    let feasibility = ccable(&[
        "scan", "--n", "8", "--min", "2", "--max", "3", "--verify", "feasibility",
    ]);
    assert_eq!(exit_code(&feasibility), 0, "{}", stderr(&feasibility));

    let equalities = ccable(&[
        "scan", "--n", "8", "--min", "1", "--max", "2", "--non-strict", "--verify", "equalities",
    ]);
    assert_eq!(exit_code(&equalities), 0, "{}", stderr(&equalities));
    assert!(stdout(&equalities).contains("max zero-count 4"));

    let plain = ccable(&["scan", "--n", "3", "--min", "2", "--max", "4"]);
    assert_eq!(exit_code(&plain), 0);
    assert!(stdout(&plain).contains("instances:      27"));

    let capped = ccable(&[
        "scan", "--n", "8", "--min", "1", "--max", "8", "--non-strict", "--cap", "1000",
    ]);
    assert_eq!(exit_code(&capped), 2);
    assert!(stderr(&capped).contains("cap"));
}

#[test]
fn svg_preview_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("p.obj");
    let svg = dir.path().join("p.svg");
    let out = ccable(&[
        "mesh",
        "--edges",
        "6,4,3,5,4",
        "--smooth",
        "10",
        "--out",
        obj.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert_eq!(text.matches("<circle ").count(), 1);
}
