use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_topos-lsc"));
    cmd.env_remove("TOPOS_LSC_BUDGET");
    cmd
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn machine(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "machine"];
    all.extend_from_slice(args);
    let out = run(&all);
    let stdout = String::from_utf8(out.stdout.clone()).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    (code(&out), report)
}

#[test]
fn group_report_lists_subgroups_and_normalization_arrows() {
    let (status, r) = machine(&["group", fixture("d4.group").to_str().unwrap()]);
    assert_eq!(status, 0);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["kind"], "group");
    assert_eq!(r["payload"]["subgroups"].as_array().unwrap().len(), 10);
    let arrows = r["payload"]["normalization_arrows"].as_array().unwrap();
    assert!(arrows.iter().any(|a| a[0] == "⟨τ⟩" && a[1] == "⟨τ,σ²⟩"));
    assert_eq!(r["payload"]["dedekind"], false);
}

#[test]
fn words_report_for_alternating_language() {
    let (status, r) = machine(&["words", "--regex", "(ab)*", "--alphabet", "ab"]);
    assert_eq!(status, 0);
    assert_eq!(r["payload"]["nerode_index"], 3);
    assert_eq!(r["payload"]["syntactic_order"], 6);
    assert_eq!(r["payload"]["orbit_meet_equals_syntactic"], true);
    assert!(r["verdicts"].as_array().unwrap().iter().all(|v| v["passed"] == true));
}

#[test]
fn words_report_from_dfa_file() {
    let (status, r) = machine(&["words", "--dfa", fixture("ends-with-a.dfa").to_str().unwrap()]);
    assert_eq!(status, 0);
    assert_eq!(r["payload"]["syntactic_order"], 3);
    let out = run(&["words", "--dfa", fixture("ends-with-a.dfa").to_str().unwrap(), "--alphabet", "ba"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn lsc_report_for_graph_site() {
    let (status, r) = machine(&["lsc", fixture("graph.category").to_str().unwrap()]);
    assert_eq!(status, 0);
    let objects = r["payload"]["objects"].as_array().unwrap();
    assert_eq!(objects[0]["states"].as_array().unwrap().len(), 1);
    assert_eq!(objects[1]["states"].as_array().unwrap().len(), 2);
    assert_eq!(objects[1]["normalization"], serde_json::json!([1, 1]));
    assert_eq!(r["payload"]["normalization_is_constant_top"], true);
}

#[test]
fn lsc_with_non_filter_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop-free.json");
    fs::write(&path, r#"{ "V": [0], "E": [0] }"#).unwrap();
    let (status, r) = machine(&[
        "lsc",
        fixture("graph.category").to_str().unwrap(),
        "--filter",
        path.to_str().unwrap(),
    ]);
    assert_eq!(status, 1);
    let failed: Vec<&Value> = r["verdicts"].as_array().unwrap().iter().filter(|v| v["passed"] == false).collect();
    assert!(failed.iter().all(|v| v["witness"].is_string()));
    assert!(failed.iter().any(|v| v["check"] == "F belongs to E_F"));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["lsc", "nosuchfile"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nosuchfile"));
}

#[test]
fn malformed_inputs_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("trunc.category", "{ \"objects\": [\"A\""),
        ("extra.category", r#"{"objects":[],"morphisms":[],"identities":{},"composition":[],"x":1}"#),
        (
            "bad-id.category",
            r#"{"objects":["A"],"morphisms":[{"name":"f","src":"A","dst":"B"}],"identities":{"A":"f"},"composition":[]}"#,
        ),
        ("bad.group", r#"{"elements":["e","a"],"table":[["e","a"],["a","a"]]}"#),
    ];
    for (name, body) in cases {
        let path = dir.path().join(name);
        fs::write(&path, body).unwrap();
        let sub = if name.ends_with(".group") { "group" } else { "lsc" };
        let out = run(&[sub, path.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
    for regex in ["a(", "()", "c", "a||"] {
        let out = run(&["words", "--regex", regex, "--alphabet", "ab"]);
        assert_eq!(code(&out), 2, "{regex}");
    }
    assert_eq!(code(&run(&["words", "--regex", "a"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn budget_exceeded_exits_3() {
    let out = run(&["--budget", "3", "group", fixture("d4.group").to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let out = bin()
        .env("TOPOS_LSC_BUDGET", "2")
        .args(["words", "--regex", "(ab)*", "--alphabet", "ab"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    // the flag overrides the environment
    let out = bin()
        .env("TOPOS_LSC_BUDGET", "2")
        .args(["--budget", "100", "words", "--regex", "(ab)*", "--alphabet", "ab"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn verify_all_on_bundled_fixtures_passes() {
    let out = run(&["verify", "--suite", "all"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("[PASS] filters/graph loop-free selection"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn verify_with_shipped_fixture_directory() {
    let (status, r) = machine(&["verify", "--suite", "filters", "--fixtures", fixture("").to_str().unwrap()]);
    assert_eq!(status, 0);
    let negative = r["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["check"].as_str().unwrap().starts_with("filters/graph-loop-free"))
        .expect("negative fixture reported");
    assert_eq!(negative["passed"], true);
    assert!(negative["witness"].as_str().unwrap().contains("expected failure"));
}

#[test]
fn verify_with_corrupted_fixtures_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("broken.dfa"), "{ not json").unwrap();
    let out = run(&["verify", "--suite", "words", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.regex"), r#"{ "alphabet": "ab", "regex": "(a" }"#).unwrap();
    assert_eq!(code(&run(&["verify", "--suite", "words", "--fixtures", dir.path().to_str().unwrap()])), 2);

    let out = run(&["verify", "--fixtures", "/definitely/not/here"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn failing_user_fixture_exits_1_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("graph.category"), dir.path().join("graph.category")).unwrap();
    // claims to be a filter but is not upward closed
    fs::write(
        dir.path().join("wrong.filter"),
        r#"{ "category": "graph.category", "members": { "V": [0], "E": [0] }, "expect_filter": true }"#,
    )
    .unwrap();
    let (status, r) = machine(&["verify", "--suite", "filters", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(status, 1);
    let failed: Vec<&Value> = r["verdicts"].as_array().unwrap().iter().filter(|v| v["passed"] == false).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|v| v["witness"].is_string()));
}

#[test]
fn reports_are_byte_stable() {
    let vee = fixture("vee.category");
    let args = ["--format", "machine", "lsc", vee.to_str().unwrap()];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
    let h1 = run(&["group", fixture("q8.group").to_str().unwrap()]).stdout;
    let h2 = run(&["group", fixture("q8.group").to_str().unwrap()]).stdout;
    assert_eq!(h1, h2);
}
