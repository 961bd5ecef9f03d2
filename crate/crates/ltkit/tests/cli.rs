use ltkit::cli::dispatch;
use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let argv = std::iter::once("ltkit").chain(args.iter().copied());
    let code = dispatch(argv, &mut o, &mut e);
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn q(num: i64, den: i64) -> Value {
    json!({"num": num, "den": den})
}

#[test]
fn polygon_example() {
    let v = run_json(&["polygon", "--n", "2", "--q", "3", "--vals", "1/2"]);
    assert_eq!(v["slopes"], json!([q(1, 4), q(1, 12)]));
    assert_eq!(v["in_D"], json!(true));
    assert_eq!(v["boundary"], json!([1]));
}

#[test]
fn periods_example() {
    let v = run_json(&["periods", "--n", "2", "--q", "3", "--depth", "2"]);
    let f0 = v["f"][0]["terms"].as_array().unwrap();
    let mons: Vec<(Value, Value)> = f0.iter().map(|t| (t["exps"].clone(), t["pi_exponent"].clone())).collect();
    assert_eq!(mons, vec![(json!([0]), json!(0)), (json!([4]), json!(-1))]);
}

#[test]
fn reduce_example() {
    let v = run_json(&["hecke", "reduce", "--n", "2", "--q", "3", "--vals", "3/10"]);
    assert_eq!(v["steps"], json!([1]));
    assert_eq!(v["final_vals"], json!([q(7, 10)]));
}

#[test]
fn deterministic_output() {
    let args = ["hecke", "sample", "--n", "3", "--q", "2", "--count", "200", "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let other = run(&["hecke", "sample", "--n", "3", "--q", "2", "--count", "200", "--seed", "8"]);
    assert_ne!(a.1, other.1);
    let w = ["witt", "selftest", "--q", "2", "--len", "3"];
    assert_eq!(run(&w).1, run(&w).1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["polygon", "--n", "2", "--q", "3", "--vals", "1/2", "--bogus"]).0, 2);
    assert_eq!(run(&["nosuch"]).0, 2);
    assert_eq!(run(&[]).0, 2);
    let (code, out, err) = run(&["polygon", "--n", "2", "--q", "3", "--vals", "-1/2"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(!err.trim().is_empty());
    assert_eq!(run(&["hecke", "quotient", "--n", "2", "--q", "3", "--vals", "1/2", "--i", "5"]).0, 1);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("ltkit-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["--out", p, "polygon", "--n", "2", "--q", "3", "--vals", "1/2"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, run(&["polygon", "--n", "2", "--q", "3", "--vals", "1/2"]).1);
}

#[test]
fn other_formats() {
    let (code, svg, _) = run(&["polygon", "--n", "3", "--q", "2", "--vals", "1/2,1/3", "--format", "svg"]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    let (code, dot, _) = run(&["building", "--n", "2", "--p", "2", "--radius", "1", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(dot.contains("digraph") || dot.contains("graph"));
    let (code, text, _) = run(&["selftest"]);
    assert_eq!(code, 0, "{text}");
    assert!(!text.contains("FAIL"));
}
