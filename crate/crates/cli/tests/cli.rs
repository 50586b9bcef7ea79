use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_affine-trees"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("affine-trees-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn example_spec(name: &str) -> Value {
    let o = run(&["examples", "build", name]);
    assert_eq!(o.status.code(), Some(0));
    stdout_json(&o)
}

#[test]
fn heisenberg_ball_passes() {
    let o = run(&["verify", "--example", "heisenberg", "--radius", "3"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = stdout_json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["ball_size"].as_u64().unwrap() > 50);
}

#[test]
fn corrupted_length_exits_one_with_witness() {
    let mut spec = example_spec("translation_z");
    spec["length_overrides"] = serde_json::json!({"a a": ["7"]});
    let p = scratch("corrupt.json", &spec.to_string());
    let o = run(&["verify", "--spec", p.to_str().unwrap(), "--radius", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], false);
    let failing: Vec<&Value> = v["axioms"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .chain(v["properties"]["checks"].as_array().unwrap())
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    assert!(failing
        .iter()
        .any(|c| !c["witnesses"].as_array().unwrap().is_empty()));
}

#[test]
fn empty_alphabet_is_trivially_fine() {
    let spec =
        r#"{"space":{"type":"linear","descriptor":{"type":"int_lex","rank":1}},"generators":[]}"#;
    let p = scratch("trivial.json", spec);
    let o = run(&["verify", "--spec", p.to_str().unwrap(), "--radius", "1"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout_json(&o)["ball_size"], 1);
}

#[test]
fn classify_nesting_map() {
    let o = run(&["classify", "--example", "nesting_map"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["classification"]["type"], "nesting_reflection");
    assert_eq!(v["verified"], true);
}

#[test]
fn classify_identity_is_elliptic() {
    let spec = r#"{"space":{"type":"linear","descriptor":{"type":"int_lex","rank":2}},
                   "sign":1,"auto":{"unipotent":[["1","0"],["0","1"]]},"translation":["0","0"]}"#;
    let p = scratch("identity.json", spec);
    let o = run(&["classify", "--spec", p.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout_json(&o)["classification"]["type"], "elliptic");
}

#[test]
fn classify_action_words() {
    let o = run(&[
        "classify",
        "--example",
        "bs",
        "--radius",
        "2",
        "--format",
        "tsv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("word\tclassification"));
    assert!(text.lines().any(|l| l.starts_with("t\t")));
}

#[test]
fn z_star_z_is_free() {
    let o = run(&[
        "freeproduct",
        "--example",
        "z_star_z",
        "--radius",
        "4",
        "--format",
        "tsv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("free: true (radius 4)"));
}

#[test]
fn degenerate_factor_is_reported() {
    let a = example_spec("translation_z");
    let mut b = a.clone();
    b["generators"][0]["symbol"] = "b".into();
    b["generators"][0]["map"]["sign"] = (-1).into();
    b["generators"][0]["map"]["translation"] = serde_json::json!(["0"]);
    let spec = serde_json::json!({"name": "degenerate", "factors": [a, b]});
    let p = scratch("degenerate.json", &spec.to_string());
    let o = run(&[
        "freeproduct",
        "--spec",
        p.to_str().unwrap(),
        "--radius",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["free"], false);
    let witness = &v["failures"][0];
    assert_eq!(witness["free"], false);
    assert!(!witness["failure"]["reason"].as_str().unwrap().is_empty());
}

#[test]
fn mixed_groups_combine_in_a_product() {
    let a = example_spec("translation_z");
    let mut b = example_spec("doubling");
    b["generators"] = serde_json::json!([b["generators"][0].clone()]);
    b["generators"][0]["symbol"] = "u".into();
    let spec = serde_json::json!({"factors": [a, b]});
    let p = scratch("mixed.json", &spec.to_string());
    let o = run(&[
        "freeproduct",
        "--spec",
        p.to_str().unwrap(),
        "--radius",
        "3",
    ]);
    assert_ne!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--example", "bs", "--radius", "2", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let j1 = run(&[
        "verify",
        "--example",
        "bs",
        "--radius",
        "2",
        "--seed",
        "5",
        "--jobs",
        "1",
    ]);
    assert_eq!(a.stdout, j1.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("affine-trees-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("list.json");
    let o = run(&["examples", "list", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["name"] == "heisenberg"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["verify", "--example", "nope"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--example", "bs", "--param", "a=x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--example", "bs", "--radius", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--example", "nesting_map"]).status.code(),
        Some(2)
    );
    let p = scratch("garbage.json", "{ not json");
    assert_eq!(
        run(&["verify", "--spec", p.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let p = scratch(
        "badmap.json",
        r#"{"space":{"type":"linear","descriptor":{"type":"int_lex","rank":1}},"generators":[{"symbol":"a","map":{"sign":2}}]}"#,
    );
    assert_eq!(
        run(&["verify", "--spec", p.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify"]).status.code(), Some(2));
}
