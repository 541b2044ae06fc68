use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const DIAMOND: &str = r#"{"size": 4, "relation": [[0, 1], [0, 2], [1, 3], [2, 3]]}"#;
const ARROW: &str = r#"{"size": 2, "relation": [[0, 1]]}"#;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_posetcat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("posetcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn audit_dimension_one() {
    let v = json(&run(&["audit-idempotents", "--dim", "1"], ""));
    assert_eq!(v["endos"], 3);
    assert_eq!(v["idempotents"], 3);
    assert_eq!(v["violations"], Value::Array(vec![]));
    assert!(v.get("wall_ms").is_none());
}

#[test]
fn sampled_audit_records_the_seed() {
    let v = json(&run(
        &["audit-idempotents", "--dim", "3", "--samples", "500", "--seed", "7"],
        "",
    ));
    assert_eq!(v["seed"], 7);
    assert_eq!(v["endos"], 500);
}

#[test]
fn certify_the_diamond() {
    let path = temp_file("diamond.json", DIAMOND);
    let v = json(&run(&["certify", "--input", path.to_str().unwrap()], ""));
    assert_eq!(v["cube_dim"], 4);
    assert_eq!(v["section"].as_array().unwrap().len(), 4);
    assert_eq!(v["retraction"].as_array().unwrap().len(), 16);
    let from_stdin = json(&run(&["certify"], DIAMOND));
    assert_eq!(from_stdin, v);
}

#[test]
fn certify_rejects_incomplete_posets() {
    let out = run(&["certify"], r#"{"size": 2, "relation": []}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn triangulation_counts() {
    let v = json(&run(
        &["triangulate", "--cube-dim", "2", "--trunc", "3", "--format", "count"],
        "",
    ));
    assert_eq!(v["counts"], serde_json::json!([4, 9, 16, 25]));
}

#[test]
fn enumeration() {
    let count = |args: &[&str]| String::from_utf8(run(args, "").stdout).unwrap().trim().to_string();
    assert_eq!(
        count(&["enumerate", "--kind", "posets", "--size", "5", "--format", "count"]),
        "63"
    );
    assert_eq!(
        count(&["enumerate", "--kind", "lattices", "--size", "6", "--format", "count"]),
        "15"
    );
    let v = json(&run(&["enumerate", "--kind", "posets", "--size", "3"], ""));
    assert_eq!(v.as_array().unwrap().len(), 5);
    let dom = temp_file("dom.json", DIAMOND);
    let cod = temp_file("cod.json", ARROW);
    let args = [
        "enumerate",
        "--kind",
        "maps",
        "--dom",
        dom.to_str().unwrap(),
        "--cod",
        cod.to_str().unwrap(),
    ];
    let maps = json(&run(&args, ""));
    assert_eq!(maps.as_array().unwrap().len(), 6);
}

#[test]
fn kan_on_representables() {
    let v = json(&run(&["kan", "--simplex", "1", "--depth", "2"], DIAMOND));
    assert_eq!(v["components"], 6);
    let out = run(&["kan", "--simplex", "1"], r#"{"size": 2, "relation": []}"#);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn horn_at_the_arrow() {
    let arrow = temp_file("arrow.json", ARROW);
    let v = json(&run(
        &["horn", "--n", "2", "--faces", "1,2", "--at", arrow.to_str().unwrap()],
        "",
    ));
    assert_eq!(v["source"]["components"], 5);
    assert_eq!(v["target"]["components"], 6);
    let out = run(&["horn", "--n", "2", "--faces", "0,1,2"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify-all", "--max-dim", "99"], "").status.code(), Some(2));
    assert_eq!(run(&["no-such-command"], "").status.code(), Some(2));
    assert_eq!(run(&["certify"], "not json").status.code(), Some(2));
}

#[test]
fn verify_all_report_is_sorted_and_deterministic() {
    let args = [
        "verify-all",
        "--max-poset",
        "4",
        "--max-dim",
        "1",
        "--max-simplex",
        "2",
        "--format",
        "json",
    ];
    let first = run(&args, "");
    let v = json(&first);
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 12);
    assert!(names.windows(2).all(|w| w[0] < w[1]));
    let mut threaded = Command::new(env!("CARGO_BIN_EXE_posetcat"));
    threaded.args(args).env("POSETCAT_THREADS", "2");
    assert_eq!(threaded.output().unwrap().stdout, first.stdout);
}

#[test]
fn human_format_lists_every_check() {
    let out = run(
        &[
            "verify-all",
            "--max-poset",
            "3",
            "--max-dim",
            "1",
            "--max-simplex",
            "2",
            "--format",
            "human",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("nat-hom") && text.contains("overall: pass"));
}
