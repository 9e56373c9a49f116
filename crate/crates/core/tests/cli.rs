use std::path::PathBuf;
use std::process::{Command, Output};

use negsphere::{FibrationSpec, PlumbingGraph, SearchResult};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_negsphere"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("negsphere-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn formula_prints_the_square() {
    let o = run(&["formula", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("s(2) = -86"));

    let o = run(&["formula", "5"]);
    assert!(stdout(&o).contains("s(5) = -221"));
    assert!(stdout(&o).contains("-217"));
}

#[test]
fn search_finds_minus_92() {
    let o = run(&["search", "2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("-92"), "{text}");
    assert!(text.contains("2×Ẽ₈ attached, IV resolved"), "{text}");
}

#[test]
fn search_json_round_trips() {
    let o = run(&["--json", "search", "6", "3", "--threads", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let r: SearchResult = serde_json::from_str(&text).unwrap();
    assert!(r.best_square <= -279);
    let again = serde_json::to_string_pretty(&r).unwrap();
    assert_eq!(again.trim(), text.trim());
    assert_eq!(r.replay().unwrap().checked_square().unwrap(), r.best_square);
}

#[test]
fn build_json_graph_round_trips() {
    let spec = scratch(
        "e6.json",
        r#"{"n":6,"fibers":["E8t","E8t","E8t","E8t","E8t","E8t","E8t","II_cusp"]}"#,
    );
    let dot = spec.with_file_name("e6.dot");
    let o = run(&[
        "--json",
        "--dot",
        dot.to_str().unwrap(),
        "build",
        spec.to_str().unwrap(),
        "--choices",
        "attach,attach,attach,attach,attach,attach,attach,replace",
        "--edge-blowups",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["square"], -279);
    assert_eq!(v["k"], 3);
    let g: PlumbingGraph = serde_json::from_value(v["graph"].clone()).unwrap();
    assert_eq!(g.checked_square().unwrap(), -279);
    let s: FibrationSpec = serde_json::from_value(v["spec"].clone()).unwrap();
    s.validate().unwrap();
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph"));
}

#[test]
fn euler_mismatch_is_invalid_input() {
    let spec = scratch("bad.json", r#"{"n":2,"fibers":["E8t","E8t","E8t","IV"]}"#);
    let o = run(&["build", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("euler sum 34 ≠ 24"), "{}", stderr(&o));
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(run(&["formula", "1"]).status.code(), Some(2));
    assert_eq!(run(&["search", "2", "0", "--allowed", "E7t"]).status.code(), Some(2));
    assert_eq!(run(&["search", "2"]).status.code(), Some(2));
    assert_eq!(run(&["build", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(run(&["conjecture", "--n-range", "5..2"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_stable() {
    let first = run(&["verify-paper"]);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
    assert!(text.contains("n=5: construction -221, printed formula -217"));
    assert!(text.contains("-279"));
    let second = run(&["verify-paper"]);
    assert_eq!(stdout(&second), text);
}

#[test]
fn conjecture_table_is_valid_json() {
    let o = run(&["--json", "conjecture", "--n-range", "2..3", "--k-range", "0..2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["violations"], 0);
}

#[test]
fn catalog_lists_every_fiber() {
    let o = run(&["--json", "catalog"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        ["E8t", "E7t", "E6t", "I0star", "II_cusp", "III", "IV", "I1_nodal"]
    );
}
