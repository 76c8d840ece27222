use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.json"))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn ux_line() -> Value {
    serde_json::from_str(&std::fs::read_to_string(corpus("ux_line")).unwrap()).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymprimes"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn mutated(name: &str, edit: impl FnOnce(&mut Value)) -> String {
    let mut v = ux_line();
    edit(&mut v);
    scratch(name, &v.to_string()).to_string_lossy().into_owned()
}

#[test]
fn missing_input_is_io_error() {
    assert_eq!(code(&["/nonexistent/problem.json"]), 1);
}

#[test]
fn unwritable_output_is_io_error() {
    let input = corpus("residue_square");
    assert_eq!(
        code(&[input.to_str().unwrap(), "--tasks", "ass_stability", "--out", "/nonexistent/dir/r.json"]),
        1
    );
}

#[test]
fn malformed_descriptions_are_validation_errors() {
    let cases = [
        scratch("truncated.json", "{\"base\": {").to_string_lossy().into_owned(),
        mutated("unknown_field.json", |v| v["colour"] = json!("red")),
        mutated("bad_element.json", |v| v["instance"]["inclusion"] = json!([["u*z"]])),
        mutated("composite_modulus.json", |v| v["base"]["p"] = json!(4)),
        mutated("bad_shape.json", |v| v["instance"]["inclusion"] = json!([["u*x", "x"]])),
        mutated("reversed_window.json", |v| v["options"]["window"] = json!([9, 3])),
        mutated("bad_task.json", |v| v["tasks"] = json!(["everything"])),
        mutated("bad_ideal.json", |v| v["ideals"] = json!([["x"]])),
    ];
    for path in &cases {
        let out = run(&[path]);
        assert_eq!(out.status.code(), Some(2), "{path}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{path}");
    }
}

#[test]
fn short_window_reports_insufficiency() {
    let input = corpus("ux_line");
    let out = run(&[input.to_str().unwrap(), "--window", "0:3", "--tasks", "ass_stability"]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["certification"]["window_sufficient"], false);
}

#[test]
fn overrides_and_output_file() {
    let input = corpus("ux_line");
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ux_report.json");
    let out = run(&[
        input.to_str().unwrap(),
        "--window",
        "0:12",
        "--confirm",
        "3",
        "--tasks",
        "ass_stability,hilbert",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(report["analysis"]["window"], json!([0, 12]));
    assert_eq!(report["analysis"]["confirm"], 3);
    assert_eq!(report["analysis"]["stable_from"], 1);
    assert!(report["rees_oracle"].is_null());
    assert!(report.get("timing_ms").is_none_or(Value::is_null));
}

#[test]
fn functor_task_without_listed_functors() {
    let input = corpus("ux_line");
    let out = run(&[input.to_str().unwrap(), "--tasks", "functor_stability"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = report["functors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["functor"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 4);
    assert!(names.iter().all(|n| n.contains("A/(u)")), "{names:?}");
}

#[test]
fn human_format_summarizes() {
    let input = corpus("f3_line_plane");
    let out = run(&[input.to_str().unwrap(), "--format", "human", "--tasks", "ass_stability,hilbert"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(0)"), "{text}");
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn timing_is_opt_in() {
    let input = corpus("residue_square");
    let out = run(&[input.to_str().unwrap(), "--tasks", "ass_stability", "--timing"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["timing_ms"].is_u64());
}
