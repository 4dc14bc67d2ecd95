use std::process::{Command, Output};

use serde_json::Value;

fn infmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infmult")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn tangent_line_json() {
    let o = infmult(&["mult", "--c1", "y", "--c2", "y*z - x^2", "--point", "[0:0:1]", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["points"][0]["mult_nonstandard"], 2);
    assert_eq!(v["points"][0]["mult_oracle"], 2);
    assert_eq!(v["points"][0]["l"], "[0:0:1]");
    assert_eq!(v["verdict"], true);
    for key in ["curve1", "curve2", "field", "points", "sum", "expected", "verdict", "seeds", "truncation_used"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn gaussian_points_need_the_field() {
    let o = infmult(&["bezout", "--c1", "x^2+y^2-z^2", "--c2", "x^2+y^2-2*z^2"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("t^2 + 1"));
}

#[test]
fn gaussian_bezout_over_qi() {
    let o = infmult(&["bezout", "--c1", "x^2+y^2-z^2", "--c2", "x^2+y^2-2*z^2", "--field", "t^2+1", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["sum"], 4);
    let mults: Vec<u64> = v["points"].as_array().unwrap().iter().map(|p| p["mult_oracle"].as_u64().unwrap()).collect();
    assert_eq!(mults, vec![2, 2]);
}

#[test]
fn json_is_reproducible() {
    let args = ["bezout", "--c1", "x*y", "--c2", "x - y + z", "--json"];
    let a = infmult(&args);
    let b = infmult(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn duality_selftest_passes() {
    let o = infmult(&["duality-selftest", "--samples", "200", "--seed", "7", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["pass"], true);
}

#[test]
fn common_component() {
    let o = infmult(&["bezout", "--c1", "x*y", "--c2", "x*z"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn expand_branches() {
    let o = infmult(&["expand", "--poly", "(x - 1)*(x - eps)", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["branches"].as_array().unwrap().len(), 2);
    let o = infmult(&["expand", "--poly", "(x - 1)*(x - eps)", "--positive", "--json"]);
    assert_eq!(json(&o)["branches"], serde_json::json!(["eps"]));
    let o = infmult(&["expand", "--poly", "x^2 + eps"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn specialize_point() {
    let o = infmult(&["specialize", "--point", "[eps : 1 + eps : eps^(-1)]", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["specialization"], "[0 : 0 : 1]");
}

#[test]
fn matrix_flag_moves_the_point() {
    // the point is given before the change; swapping x and z moves it to [1:0:0]
    let o = infmult(&[
        "mult",
        "--c1",
        "y",
        "--c2",
        "y*z - x^2",
        "--point",
        "[0:0:1]",
        "--matrix",
        "0,0,1,0,1,0,1,0,0",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["points"][0]["l"], "[1:0:0]");
    assert_eq!(v["points"][0]["mult_nonstandard"], 2);
    assert_eq!(code(&infmult(&["mult", "--c1", "y", "--c2", "x", "--point", "[0:0:1]", "--matrix", "1,2,3"])), 6);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&infmult(&["mult", "--c1", "x"])), 6);
    assert_eq!(code(&infmult(&["bezout", "--c1", "x +", "--c2", "y"])), 6);
    assert_eq!(code(&infmult(&["bezout", "--c1", "x", "--c2", "y", "--truncation", "8", "--cap", "4"])), 6);
    assert_eq!(code(&infmult(&["bezout", "--c1", "x", "--c2", "y", "--field", "t^2 - 1"])), 6);
    assert_eq!(code(&infmult(&["frobnicate"])), 6);
    assert_eq!(code(&infmult(&["--help"])), 0);
}
