use std::process::{Command, Output};

use serde_json::Value;

fn stmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stmod")).args(args).output().expect("binary runs")
}

fn json_lines(bytes: &[u8]) -> Vec<Value> {
    String::from_utf8_lossy(bytes).lines().map(|l| serde_json::from_str(l).expect("one JSON object per line")).collect()
}

#[test]
fn passing_suite_exits_zero() {
    let out = stmod(&["verify", "tate-unit", "--group", "C2", "--tate-range", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = json_lines(&out.stdout);
    assert_eq!(recs.len(), 5);
    assert!(recs.iter().all(|r| r["passed"] == Value::Bool(true)));
}

#[test]
fn failing_check_exits_one() {
    // Integral lattices over C2 are not all weakly projective.
    let out = stmod(&["verify", "maschke", "--group", "C2", "--ring", "Z", "--count", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_lines(&out.stdout).iter().any(|r| r["passed"] == Value::Bool(false)));
}

#[test]
fn bad_configuration_exits_two() {
    for args in [
        &["verify", "nonsense"][..],
        &["cohomology", "--group", "Nope", "--ring", "Z"],
        &["cohomology", "--group", "C2", "--ring", "R"],
        &["support", "--group", "C2", "--ring", "F2", "--module", "what"],
    ] {
        let out = stmod(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn out_file_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let out = stmod(&["cohomology", "--group", "V4", "--ring", "F2", "--cap", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let recs = json_lines(&std::fs::read(&path).unwrap());
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["certificate"]["generators"].as_array().unwrap().len(), 2);
}

#[test]
fn text_format_prints_status_first() {
    let out = stmod(&["verify", "tate-unit", "--group", "C3", "--tate-range", "1", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn support_of_regular_module_is_empty() {
    let out = stmod(&["support", "--group", "V4", "--ring", "F2", "--module", "regular"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = json_lines(&out.stdout);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["certificate"]["empty"], Value::Bool(true));
    assert_eq!(recs[0]["certificate"]["weakly_projective"], Value::Bool(true));
}
