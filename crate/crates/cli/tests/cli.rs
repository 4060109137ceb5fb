use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn medcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medcube")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    dir("data").join(name).to_string_lossy().into_owned()
}

fn ok_json(args: &[&str]) -> Value {
    let out = medcube(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn golden(name: &str, args: &[&str]) {
    let out = medcube(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}");
    let expected = std::fs::read_to_string(dir("golden").join(name)).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{name}");
}

#[test]
fn classify_isom_cube_is_elliptic_with_full_cube() {
    let v = ok_json(&["classify", "--example", "isom-cube"]);
    assert_eq!(v["class"], "elliptic");
    assert_eq!(v["min_cube_dim"], 3);
}

#[test]
fn decompose_rotating_prism_factors() {
    let v = ok_json(&["decompose", "--example", "square-prism"]);
    assert_eq!(v["factors"], serde_json::json!({"Q": "cube(2)", "F": "line", "T": "point"}));
    assert_eq!(v["class"], "inverting");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true || c["required"] == false));
}

#[test]
fn cubulate_tripod_dot_has_star() {
    let out = medcube(&["cubulate", "--example", "tripod", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    let nodes = dot
        .lines()
        .filter(|l| l.trim_end().ends_with(';') && l.trim_start().starts_with('"') && !l.contains("--"))
        .count();
    assert_eq!(nodes, 4);
    assert_eq!(dot.matches(" -- ").count(), 3);
}

#[test]
fn golden_outputs() {
    golden("classify_isom_cube.json", &["classify", "--example", "isom-cube"]);
    golden("minset_isom_cube.json", &["minset", "--example", "isom-cube"]);
    golden("cubulate_tripod.dot", &["cubulate", "--example", "tripod", "--format", "dot"]);
    golden("decompose_square_prism.json", &["decompose", "--example", "square-prism", "--window", "2"]);
    golden("hyperplanes_path.json", &["hyperplanes", "--input", &data("path.json")]);
}

#[test]
fn merged_inputs() {
    let v = ok_json(&["minset", "--input", &data("path.json"), "--input", &data("swap.json")]);
    assert_eq!(v["members"], serde_json::json!(["b"]));
    assert_eq!(v["min_displacement"], 0);
    let v = ok_json(&["transfer", "--example", "line", "--input", &data("half_line.json")]);
    assert_eq!(v["transfer"], -1);
}

#[test]
fn exit_statuses() {
    let parse = medcube(&["validate", "--input", &data("unknown_key.json")]);
    assert_eq!(parse.status.code(), Some(2));
    let missing = medcube(&["validate", "--input", "no/such/file.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_window = medcube(&["classify", "--example", "line", "--window", "0"]);
    assert_eq!(bad_window.status.code(), Some(2));

    let invariant = medcube(&["validate", "--input", &data("not_median.json")]);
    assert_eq!(invariant.status.code(), Some(3));
    let witness: Value = serde_json::from_slice(&invariant.stdout).unwrap();
    assert_eq!(witness["valid"], false);
    assert_eq!(witness["witness"]["triple"].as_array().unwrap().len(), 3);

    let precondition = medcube(&["axis", "--example", "square-prism"]);
    assert_eq!(precondition.status.code(), Some(4));
    let body: Value = serde_json::from_slice(&precondition.stdout).unwrap();
    assert_eq!(body["error"]["kind"], "precondition");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["selftest", "--suite", "median_core,transfer", "--seed", "9"][..],
        &["decompose", "--example", "chain-line"][..],
        &["directions", "--example", "plane"][..],
    ] {
        let a = medcube(args);
        let b = medcube(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("medcube-out-{}.json", std::process::id()));
    let out = medcube(&["length", "--example", "square-prism", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["translation_length"], "1");
    assert_eq!(v["min_displacement"], 2);
}

#[test]
fn queries_on_finite_hosts() {
    let cube = ["--example", "isom-cube"];
    let v = ok_json(&[&["median", "--points", "001,010,100"][..], &cube].concat());
    assert_eq!(v["median"], "000");
    let v = ok_json(&[&["hull", "--set", "001,010"][..], &cube].concat());
    assert_eq!(v["convex_hull"].as_array().unwrap().len(), 4);
    let v = ok_json(&[&["project", "--set", "000,001", "--point", "111"][..], &cube].concat());
    assert_eq!(v["gate"], "001");
    let v = ok_json(&[&["quotient", "--walls", "0"][..], &cube].concat());
    assert_eq!(v["complex"]["vertices"].as_array().unwrap().len(), 4);
    let v = ok_json(&[&["subalgebra", "--set", "000,001,010,100"][..], &cube].concat());
    assert_eq!(v["complex"]["edges"].as_array().unwrap().len(), 3);
    let v = ok_json(&[&["medset"][..], &cube].concat());
    assert_eq!(v["count"], 8);
}

#[test]
fn periodic_commands() {
    let v = ok_json(&["directions", "--example", "plane"]);
    assert_eq!(v["count"], 9);
    let v = ok_json(&["directions", "--example", "chain"]);
    assert_eq!(v["count"], 3);
    let v = ok_json(&["inverted", "--example", "square-prism"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["pairwise_transverse"], true);
    let v = ok_json(&["axis", "--example", "chain-line"]);
    assert_eq!(v["period"].as_array().unwrap().len(), 2);
    let v = ok_json(&["abelianflat", "--example", "plane"]);
    assert_eq!(v["shape"], "flat(2)");
    let v = ok_json(&["validate", "--example", "chain-line"]);
    assert_eq!(v["periodic"]["symmetries"], true);
}
