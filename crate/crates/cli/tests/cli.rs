use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn itconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itconn")).args(args).env_remove("ITCONN_SEED").output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = itconn(args);
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (code, report)
}

#[test]
fn phi_t_is_iterative() {
    let dir = TempDir::new().unwrap();
    for p in [2, 3, 5] {
        let f = write(&dir, "phi.json", &format!(r#"{{"p": {p}, "domain": {{"kind": "ratfunc"}}, "N": 32, "images": [["t", "1"]]}}"#));
        let (code, r) = run_json(&["check-iterative", f.to_str().unwrap()]);
        assert_eq!(code, 0, "{r}");
        assert_eq!(r["verdict"], true);
        assert_eq!(r["data"]["checked_order"], 32);
    }
}

#[test]
fn odd_power_counterexample_fails() {
    // t ↦ t + T^(2q-1) with q = 2 over F_2
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "cex.json", r#"{"p": 2, "domain": {"kind": "poly", "vars": 1}, "N": 8, "images": [["t1", "1", "0", "1"]]}"#);
    let (code, r) = run_json(&["check-iterative", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], false);
    assert_eq!(r["data"]["first_failure"]["i"], 1);
    assert_eq!(r["data"]["first_failure"]["j"], 2);
}

#[test]
fn newton_extension_from_a_single_image_list() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ext.json", r#"{"p": 2, "domain": {"kind": "ext", "minpoly": ["t", "1", "1"]}, "N": 16, "images": [["t", "1"]]}"#);
    let (code, _) = run_json(&["check-iterative", f.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("malformed.json", "{"),
        ("prime.json", r#"{"p": 4, "domain": {"kind": "ratfunc"}, "N": 4, "images": [["t", "1"]]}"#),
        ("kind.json", r#"{"p": 2, "domain": {"kind": "tensor"}, "N": 4, "images": [["t", "1"]]}"#),
        ("expr.json", r#"{"p": 2, "domain": {"kind": "ratfunc"}, "N": 4, "images": [["t +* 1"]]}"#),
        ("monic.json", r#"{"p": 3, "domain": {"kind": "ext", "minpoly": ["t", "2"]}, "N": 4, "images": [["t", "1"]]}"#),
    ];
    for (name, body) in cases {
        let f = write(&dir, name, body);
        let out = itconn(&["check-iterative", f.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    assert_eq!(itconn(&["check-iterative", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(itconn(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn flag_mismatch_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "phi.json", r#"{"p": 3, "domain": {"kind": "ratfunc"}, "N": 8, "images": [["t", "1"]]}"#);
    assert_eq!(itconn(&["--p", "5", "check-iterative", f.to_str().unwrap()]).status.code(), Some(2));
    let (code, r) = run_json(&["--N", "12", "check-iterative", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["N"], 12);
}

#[test]
fn unipotent_solution() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "uni.json",
        r#"{"p": 2, "n": 2, "L": 7, "N": 64,
            "A": [[["0","1"],["0","0"]], [["0","1"],["0","0"]], [["0","0"],["0","0"]], [["0","0"],["0","0"]],
                  [["0","0"],["0","0"]], [["0","0"],["0","0"]], [["0","0"],["0","0"]]]}"#,
    );
    let (code, r) = run_json(&["solve", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    let y: Vec<Vec<String>> = serde_json::from_value(r["data"]["Y"].clone()).unwrap();
    assert_eq!(y, [["1", "t + t^2"], ["0", "1"]]);
    assert_eq!(r["data"]["residual"]["checked"], 64);
}

#[test]
fn zero_equation_gives_identity() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "zero.json", r#"{"p": 3, "n": 2, "L": 2, "N": 8, "A": [[["0","0"],["0","0"]], [["0","0"],["0","0"]]]}"#);
    let (code, r) = run_json(&["solve", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["Y"], serde_json::json!([["1", "0"], ["0", "1"]]));
}

#[test]
fn incompatible_equation_exits_1() {
    // A_1 = 1, A_3 = 0 over F_3: θ^(1)θ^(1) = 2θ^(2) forces A_2, which then
    // contradicts the equation for k = 1 at t^2
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "inc.json", r#"{"p": 3, "n": 1, "L": 2, "N": 8, "A": [[["1"]], [["0"]]]}"#);
    let (code, r) = run_json(&["solve", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["data"]["first_failure"], serde_json::json!({"k": 1, "degree": 2}));
}

#[test]
fn shallow_depth_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "shallow.json", r#"{"p": 2, "n": 1, "L": 2, "N": 8, "A": [[["0"]], [["0"]]]}"#);
    assert_eq!(itconn(&["solve", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn identity_system_roundtrips() {
    let dir = TempDir::new().unwrap();
    let f =
        write(&dir, "fc.json", r#"{"p": 2, "n": 2, "L": 2, "B": [[["1","0"],["0","1"]], [["1","0"],["0","1"]], [["1","0"],["0","1"]]]}"#);
    let (code, r) = run_json(&["roundtrip", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn broken_chain_fails_roundtrip() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "fc.json", r#"{"p": 2, "n": 1, "L": 2, "B": [[["1"]], [["t^2+1"]], [["(t^2+1)*(t^4+t)"]]]}"#);
    let (code, _) = run_json(&["roundtrip", f.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn extracted_system_feeds_roundtrip() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "ids.json", r#"{"p": 2, "n": 1, "L": 2, "C": [[["1/(1+t)"]], [["1/(1+t^2)"]]]}"#);
    let sys = dir.path().join("sys.json");
    let out = itconn(&["--out", sys.to_str().unwrap(), "extract-projsys", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let (code, r) = run_json(&["roundtrip", sys.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn mupmup_example_passes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "mupmup.json", r#"{"p": 2, "digits": [1, 1, 1, 1], "L": 4, "D": 3}"#);
    let (code, r) = run_json(&["verify-example", "mupmup", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.contains("(x1 x2 - 1)")));
    assert!(names.iter().any(|n| n.starts_with("I -> R (x) I")));
}

#[test]
fn other_examples_pass() {
    for example in ["gm", "alpalp"] {
        let (code, r) = run_json(&["verify-example", example]);
        assert_eq!(code, 0, "{r}");
    }
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "gm0.json", r#"{"p": 3, "digits": [0, 0], "L": 2}"#);
    let (code, r) = run_json(&["verify-example", "gm", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["checks"][1]["name"], "s is constant");
}

#[test]
fn reports_are_deterministic() {
    let a = itconn(&["suite", "--criterion", "5"]);
    let b = itconn(&["suite", "--criterion", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = itconn(&["--format", "text", "suite", "--criterion", "1"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.starts_with("[PASS] criterion 1 "));
    assert!(text.ends_with("suite: PASS\n"));
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_itconn")).args(["suite", "--criterion", "10"]).env("ITCONN_SEED", "7").output().unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["data"]["seed"], 7);
    let (_, r) = run_json(&["--seed", "9", "suite", "--criterion", "10"]);
    assert_eq!(r["data"]["seed"], 9);
}

#[test]
fn non_descending_structure_exits_1() {
    // Θ^(1) = θ^(1) + 1 has no nonzero rational kernel over F_2(t)
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c1.json", r#"{"p": 2, "n": 1, "L": 1, "C": [[["1"]]]}"#);
    let (code, r) = run_json(&["extract-projsys", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["checks"][0]["passed"], true);
    assert_eq!(r["checks"][1]["passed"], false);
}
