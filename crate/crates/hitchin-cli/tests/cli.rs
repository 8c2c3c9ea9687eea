use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hitchin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

#[test]
fn classify_two_i2() {
    let o = run(&["classify", "--params", &data("d22_ss_2i2.json"), "--case", "d22-ss"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["infinity"], json!("i2*"));
    assert_eq!(r["fibers"], json!(["i2", "i2"]));
    assert_eq!(r["branch"], json!("d22-ss/2i2"));
}

#[test]
fn classify_two_i2_special_weights_uses_one_wall() {
    let o = run(&[
        "classify",
        "--params",
        &data("d22_ss_2i2.json"),
        "--weights",
        &data("weights_special.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let mut pairs: Vec<(Value, Value)> = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["ss"].clone(), e["s"].clone()))
        .collect();
    pairs.sort_by_key(|p| p.0.to_string());
    assert_eq!(pairs, vec![(json!([1, 0]), json!([1, -1])), (json!([2, 0]), json!([2, 0]))]);
}

#[test]
fn not_elliptic_exits_3_with_reason() {
    let o = run(&["classify", "--params", &data("d31_ns_q0.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(report(&o)["reason"], json!("Q=0"));
}

#[test]
fn schema_errors_exit_2() {
    let bad_param = r#"{"case":"d22-nn","params":{"x":[1,1,0,1]}}"#;
    assert_eq!(run(&["classify", "--params", bad_param]).status.code(), Some(2));
    let wrong_case = run(&["classify", "--params", &data("d22_ss_2i2.json"), "--case", "d31-ss"]);
    assert_eq!(wrong_case.status.code(), Some(2));
    let bad_weights = r#"{"alpha":{"p1":[1,3],"m1":[0,1],"p2":[0,1],"m2":[0,1]}}"#;
    let o = run(&["classify", "--params", &data("d22_ss_2i2.json"), "--weights", bad_weights]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["classify", "--params", &data("d22_ss_2i2.json"), "--tol", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["classify", "--params", "{not json"]).status.code(), Some(2));
}

#[test]
fn verify_d22_nn_agrees_and_is_deterministic() {
    let args = ["verify", "--case", "d22-nn", "--samples", "1000", "--seed", "7"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let r = report(&a);
    assert_eq!(r["agree"], json!(1000));
    assert_eq!(r["disagree"], json!([]));
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_disagreement_exits_4() {
    // A root tolerance this coarse merges distinct roots.
    let o = run(&["verify", "--case", "d22-ss", "--samples", "50", "--seed", "1", "--tol", "0.5"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!report(&o)["disagree"].as_array().unwrap().is_empty());
}

#[test]
fn sweep_branch_filter() {
    let o = run(&["sweep", "--branch", "d31-sn/iv", "--samples", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let rows = r["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    for row in rows {
        assert_eq!(row["target"], json!("d31-sn/iv"));
        assert_eq!(row["agree"], json!(true));
    }
    assert_eq!(run(&["sweep", "--branch", "nope"]).status.code(), Some(2));
}

#[test]
fn wallcross_keeps_classes_and_shifts_bidegrees() {
    let o = run(&[
        "wallcross",
        "--params",
        &data("d22_ss_2i2.json"),
        "--weights",
        &data("weights_generic.json"),
        "--from",
        "-1/2",
        "--to",
        "3/2",
        "--step",
        "1/2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["walls"], json!([0, 1]));
    assert_eq!(r["wall_hits"], json!([[0, 1], [1, 1]]));
    let steps = r["steps"].as_array().unwrap();
    let first = &steps[0]["report"]["entries"][0];
    let bidegrees = |s: &Value| -> Vec<Value> {
        s["report"]["entries"][0]["components"]
            .as_array()
            .unwrap()
            .iter()
            .filter_map(|c| c.get("bidegree").cloned())
            .collect()
    };
    for s in steps.iter().step_by(2) {
        assert_eq!(s["report"]["entries"][0]["ss"], first["ss"]);
        assert_eq!(s["report"]["entries"][0]["s"], first["s"]);
    }
    assert_eq!(bidegrees(&steps[0]), vec![json!([1, 0]), json!([2, -1])]);
    assert_eq!(bidegrees(&steps[2]), vec![json!([0, 1]), json!([1, 0])]);
    assert_eq!(bidegrees(&steps[4]), vec![json!([-1, 2]), json!([0, 1])]);
}
