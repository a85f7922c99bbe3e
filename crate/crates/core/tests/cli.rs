use std::process::{Command, Output};

use serde_json::Value;

fn logbehave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logbehave"))
        .args(args)
        .env_remove("LOGBEHAVE_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_exact_terms() {
    let o = logbehave(&["eval", "--seq", "a", "--range", "1..5"]);
    assert_eq!(o.status.code(), Some(0));
    let body: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(body, ["1\t-1", "2\t1", "3\t9", "4\t61", "5\t587"]);
}

#[test]
fn char_poly_of_a() {
    let o = logbehave(&["char-poly", "--seq", "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("x^3 - 35x^2 + 35x - 1"));
}

#[test]
fn exit_codes() {
    assert_eq!(logbehave(&["certify-ratio", "--seq", "b", "--range", "1..60"]).status.code(), Some(0));
    let o = logbehave(&["certify-ratio", "--seq", "a", "--range", "2..60"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("witness -20/9"));
    assert_eq!(logbehave(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(logbehave(&["eval", "--range", "0..3", "--seq", "a"]).status.code(), Some(1));
    assert_eq!(logbehave(&["eval", "--precision", "8"]).status.code(), Some(1));
}

#[test]
fn precision_env_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_logbehave"))
        .args(["roots", "--seq", "a", "--format", "json"])
        .env("LOGBEHAVE_PRECISION", "512")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["precision"], 512);
    let flag = logbehave(&["roots", "--seq", "a", "--format", "json", "--precision", "300"]);
    let v: Value = serde_json::from_slice(&flag.stdout).unwrap();
    assert_eq!(v["config"]["precision"], 300);
}

#[test]
fn file_round_trip_matches_named_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.txt");
    let p = path.to_str().unwrap();
    let o = logbehave(&["eval", "--seq", "b", "--range", "1..60", "--output", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());

    let again = logbehave(&["eval", "--seq", p, "--range", "1..60"]);
    let named = logbehave(&["eval", "--seq", "b", "--range", "1..60"]);
    let strip = |s: String| s.lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stdout(&again)), strip(stdout(&named)));

    let from_file = logbehave(&["classify", "--seq", p, "--range", "1..60", "--format", "json"]);
    let v: Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(v["result"]["verdict"]["kind"], "threshold");
}

#[test]
fn identical_config_gives_identical_bytes() {
    for args in [
        &["fit-puiseux", "--seq", "b", "--range", "1..200", "--format", "json"][..],
        &["audit-bounds", "--seq", "a", "--range", "1..80"][..],
        &["audit-apery-asym", "--range", "1..30", "--format", "csv"][..],
        &["report-all", "--range", "1..60"][..],
    ] {
        let first = logbehave(args);
        let second = logbehave(args);
        assert_eq!(first.status.code(), second.status.code());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn report_all_json_shape() {
    let o = logbehave(&["report-all", "--range", "1..80"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    for s in ["a", "b"] {
        assert_eq!(v["result"][s]["ratio_limit"]["exact"], "17 + 12*sqrt(2)");
        assert!(v["result"][s]["ratio_limit"]["value"].as_str().unwrap().starts_with("33.9705627"));
    }
    assert_eq!(v["result"]["a"]["ratio_monotone_from"], 3);
    assert_eq!(v["result"]["overall"], "pass");
}

#[test]
fn guess_rec_recovers_a() {
    let o = logbehave(&["guess-rec", "--seq", "a", "--range", "1..80", "--max-degree", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("proportional to the known recurrence: yes"));
}
