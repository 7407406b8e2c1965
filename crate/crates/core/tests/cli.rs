use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convex-chains")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn count_at_the_anchor() {
    let out = run(&["--deterministic", "count", "--n", "100"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["results"]["value"], "26878385993387721255010");
    assert!(v.get("timestamp").is_none());
}

#[test]
fn estimate_reports_scientific_value_and_ratio() {
    let out = run(&["--deterministic", "estimate", "--n", "100", "--zeros", "2", "--exact"]);
    assert!(out.status.success());
    let v = json(&out);
    let r = &v["results"];
    assert_eq!(r["value"]["exponent"], 22);
    let mantissa = r["value"]["mantissa"].as_f64().unwrap();
    assert!((2.2..=2.6).contains(&mantissa), "{mantissa}");
    assert_eq!(r["exact"], "26878385993387721255010");
    let ratio = r["exact_over_estimate"].as_f64().unwrap();
    assert!((1.05..=1.20).contains(&ratio));
}

#[test]
fn zeros_carry_complex_objects() {
    let v = json(&run(&["--deterministic", "zeros", "--height", "30"]));
    let zeros = v["results"].as_array().unwrap();
    assert_eq!(zeros.len(), 3);
    assert!((zeros[0]["gamma"].as_f64().unwrap() - 14.1347).abs() < 5e-4);
    assert!(zeros[0]["zeta_prime"]["re"].is_f64() && zeros[0]["zeta_prime"]["im"].is_f64());
}

#[test]
fn verify_suites_pass() {
    for suite in ["oracle", "identities", "paper"] {
        let out = run(&["--deterministic", "verify", "--suite", suite]);
        assert!(out.status.success(), "{suite}: {}", String::from_utf8_lossy(&out.stdout));
        let v = json(&out);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    }
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let args = ["--deterministic", "--threads", "2", "sample", "--n", "20", "--samples", "20000", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // the thread count must not change the draws
    let c = run(&["--deterministic", "--threads", "3", "sample", "--n", "20", "--samples", "20000", "--seed", "7"]);
    let strip = |o: &Output| {
        let mut v = json(o);
        v["parameters"].as_object_mut().unwrap().remove("threads");
        v
    };
    assert_eq!(strip(&a), strip(&c));
}

#[test]
fn csv_output() {
    let out = run(&["--format", "csv", "count", "--n1", "2", "--n2", "1", "--table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind,n1,n2,value\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 2);
}

#[test]
fn conditioned_chain_files() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["svg", "csv"] {
        let path = dir.path().join(format!("chain.{ext}"));
        let out = run(&["sample-conditioned", "--n", "10", "--seed", "3", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let body = std::fs::read_to_string(&path).unwrap();
        match ext {
            "svg" => assert!(body.starts_with("<svg") && body.contains("polyline")),
            _ => assert!(body.lines().last().unwrap().ends_with("10,10")),
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["logz", "--beta", "0"]).status.code(), Some(2));
    assert_eq!(run(&["count"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let poles = run(&["dirichlet", "--sigma", "1", "--t", "0", "--m", "100"]);
    assert_eq!(poles.status.code(), Some(2));
    let zeros = run(&["icrit", "--beta", "0.01", "--zeros", "1000"]);
    assert_eq!(zeros.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&zeros.stderr).contains("zeros"));
    assert_eq!(run(&["count", "--n", "300", "--max-cells", "1000"]).status.code(), Some(3));
    assert_eq!(run(&["sample-conditioned", "--n", "150", "--max-draws", "2"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
