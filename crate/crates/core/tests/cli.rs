mod common;

use std::process::{Command, Output};

use common::problem_path;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pencil-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(name: &str) -> String {
    problem_path(name).to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_ex1_passes() {
    let o = run(&["check", &path("ex1"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["manifest"]["seed"], 0);
    assert_eq!(v["manifest"]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn controls_fail_with_code_1() {
    for name in ["ex1_sign_flipped", "ex1_tangential", "ex1_oblique_control"] {
        let o = run(&["check", &path(name)]);
        assert_eq!(o.status.code(), Some(1), "{name}");
    }
}

#[test]
fn epsilon_file_checks_with_endpoint() {
    let o = run(&["check", &path("ex1_epsilon")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["check", "/nonexistent/problem.json"]).status.code(), Some(2));
    assert_eq!(run(&["check", &path("ex1"), "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["solve-model", &path("ex1"), "--xi", "1", "--lambda", "1", "--j", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["polygon", "--r", "1", "--s", "1"]).status.code(), Some(2));
}

#[test]
fn malformed_json_exits_2() {
    let dir = std::env::temp_dir().join(format!("pencil-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ \"n\": 2, oops").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_refuses_when_interior_condition_fails() {
    let o = run(&["verify", &path("ex1_sign_flipped"), "--suite", "apriori"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("suite not run"));
}

#[test]
fn verify_oblique_control_runs_and_fails() {
    let o = run(&["verify", &path("ex1_oblique_control"), "--suite", "apriori"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stdout.is_empty());
}

#[test]
fn verify_csv_has_header() {
    let csv = std::env::temp_dir().join(format!("pencil-lab-csv-{}.csv", std::process::id()));
    let o = run(&["verify", &path("ex1"), "--suite", "wholespace", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    std::fs::remove_file(&csv).unwrap();
    assert!(text.lines().next().unwrap().starts_with("table,param,lhs,rhs,ratio"), "{text}");
    assert!(text.lines().count() > 2);
}

#[test]
fn solve_model_reports_closed_form() {
    let o = run(&["solve-model", &path("ex1"), "--xi", "1", "--lambda", "1.7320508075688772", "--j", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("0.957"), "{text}");
}

#[test]
fn polygon_lists_lattice_points() {
    let o = run(&["polygon", "--r", "4", "--s", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["card"], 14);
}

#[test]
fn timing_stays_off_stdout() {
    let o = run(&["check", &path("ex1"), "--json"]);
    assert!(!stdout(&o).contains("elapsed"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("elapsed"));
}

#[test]
fn bundled_problems_follow_the_shipped_schema() {
    let schema_path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/problem.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let props = schema["properties"].as_object().unwrap();
    let required: Vec<&str> = schema["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    for name in ["ex1", "ex1_epsilon", "ex1_sign_flipped", "ex1_tangential", "ex1_oblique_control"] {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path(name)).unwrap()).unwrap();
        let obj = v.as_object().unwrap();
        for key in obj.keys() {
            assert!(props.contains_key(key), "{name}: {key} not in schema");
        }
        for key in &required {
            assert!(obj.contains_key(*key), "{name}: missing {key}");
        }
        assert_eq!(run(&["validate", &path(name)]).status.code(), Some(0), "{name}");
    }
}
