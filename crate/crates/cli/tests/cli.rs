use std::process::{Command, Output};

use irrslope::presentation::compile_word;
use irrslope::TreePairDiagram;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrslope")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_string()
}

#[test]
fn golden_relation_is_equal() {
    let o = run(&["eq", "y0 y0", "x0 x1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "equal");
    let o = run(&["eq", "y0", "x0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not equal");
}

#[test]
fn eq_matches_library() {
    let pairs = [
        ("c1 y0", "y2^-1 c2 c2"),
        ("p0 p0", ""),
        ("c1^3", ""),
        ("x1 x0", "x0 x1"),
        ("y0 y2", "y2 y0"),
        ("p1 p0 p1", "p0 p1 p0"),
        ("x0 x2", "x1 x0"),
        ("c2 p0", "p0 c2"),
    ];
    for (a, b) in pairs {
        let lib = compile_word(&a.parse().unwrap()).unwrap().equals(&compile_word(&b.parse().unwrap()).unwrap());
        let o = run(&["eq", a, b]);
        assert_eq!(o.status.code(), Some(if lib { 0 } else { 1 }), "{a} vs {b}");
    }
}

#[test]
fn parity_of_z0() {
    assert_eq!(stdout(&run(&["parity", "y0 y2"])), "0");
    assert_eq!(stdout(&run(&["parity", "y1"])), "1");
    let o = run(&["--json", "parity", "x0 y3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["parity"], 1);
}

#[test]
fn relcheck_passes() {
    let o = run(&["relcheck", "--max-index", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1.5") && out.contains("6.4"));
    assert!(out.ends_with("pass"), "{out}");
    let o = run(&["--ring", "beta", "--json", "relcheck", "--max-index", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn reduce_json_round_trips() {
    for w in ["x0 x0^-1 y1", "c2 p1 y0^-1", "y3"] {
        let o = run(&["--json", "reduce", w]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let d = TreePairDiagram::from_json(&v).unwrap();
        assert!(d.equals(&compile_word(&w.parse().unwrap()).unwrap()), "{w}");
        assert_eq!(d.to_json(), v);
    }
}

#[test]
fn eval_and_classify() {
    assert_eq!(stdout(&run(&["eval", "x0", "--at", "1-1*t"])), "0+1*t");
    assert_eq!(stdout(&run(&["eval", "", "--at", "0+1*t"])), "0+1*t");
    assert_eq!(stdout(&run(&["classify", "c1"])), "T");
    assert_eq!(stdout(&run(&["classify", "x0 y1"])), "F");
    assert_eq!(stdout(&run(&["classify", "p0"])), "V");
}

#[test]
fn normal_form_recompiles() {
    let o = run(&["normal-form", "y3 x1^-1 c2 p1 y0^-1"]);
    assert_eq!(o.status.code(), Some(0));
    let nf = stdout(&o);
    let a = compile_word(&nf.parse().unwrap()).unwrap();
    assert!(a.equals(&compile_word(&"y3 x1^-1 c2 p1 y0^-1".parse().unwrap()).unwrap()));
}

#[test]
fn factor_requires_parity_zero() {
    assert_eq!(run(&["factor", "y0"]).status.code(), Some(3));
    let o = run(&["--json", "factor", "p0 y0 y2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut product = TreePairDiagram::identity();
    for f in v["factors"].as_array().unwrap() {
        product = product.compose(&TreePairDiagram::from_json(&f["diagram"]).unwrap()).unwrap();
    }
    assert!(product.equals(&compile_word(&"p0 y0 y2".parse().unwrap()).unwrap()));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "x0 q3"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "x0", "--at", "1+*t"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "x0", "--at", "2"]).status.code(), Some(3));
    assert_eq!(run(&["--ring", "beta", "classify", "c1"]).status.code(), Some(2));
    assert_eq!(run(&["--ring", "beta", "normal-form", "x0"]).status.code(), Some(3));
}

#[test]
fn render_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.dot");
    let o = run(&["render", "p0 x1", "--dot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("cluster_domain") && dot.contains("cluster_range"));
}

#[test]
fn random_is_deterministic() {
    let a = stdout(&run(&["random", "--length", "12", "--seed", "5"]));
    let b = stdout(&run(&["random", "--length", "12", "--seed", "5"]));
    assert_eq!(a, b);
    assert_eq!(a.split_whitespace().count(), 12);
    for seed in 0..5 {
        let s = seed.to_string();
        let w = stdout(&run(&["random", "--length", "9", "--seed", &s, "--parity", "0"]));
        assert_eq!(stdout(&run(&["parity", &w])), "0", "{w}");
        let w = stdout(&run(&["--ring", "beta", "random", "--length", "9", "--seed", &s, "--parity", "1"]));
        assert_eq!(stdout(&run(&["--ring", "beta", "parity", &w])), "1", "{w}");
    }
}
