//! End-to-end tests of the `resval` binary.

use std::process::{Command, Output};

use proptest::prelude::*;
use resval_cli::parse_polynomial;
use resval_core::Polynomial;
use serde_json::Value;

fn resval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = resval(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> Option<i32> {
    resval(args).status.code()
}

#[test]
fn analyze_worked_example() {
    let v = json(&["analyze", "--f", "x^2+5*x+6", "--g", "x^2+x", "--p", "2"]);
    assert_eq!(
        (v["s1"].as_u64(), v["s2"].as_u64(), v["S"].as_u64()),
        (Some(1), Some(1), Some(1))
    );
    assert_eq!(v["vp_r"], 2);
    assert_eq!(v["bound_with_S_integral"], "2");
    assert_eq!(v["gaps"]["bound_with_S_integral"], "0");
}

#[test]
fn analyze_coprime_linears() {
    let v = json(&[
        "analyze", "--f", "x-1", "--g", "[1,1]", "--p", "2", "--check",
    ]);
    assert_eq!(
        (v["s1"].as_u64(), v["s2"].as_u64(), v["S"].as_u64()),
        (Some(0), Some(0), Some(1))
    );
    assert_eq!(v["vp_r"], 1);
    assert_eq!(v["bound_with_S_integral"], "1");
    assert!(v["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .all(|o| o["passed"] != false));
}

#[test]
fn exit_codes() {
    assert_eq!(
        code(&["analyze", "--f", "x^2+1", "--g", "x^2+1", "--p", "2"]),
        Some(2)
    );
    assert_eq!(
        code(&["analyze", "--f", "x^2+1", "--g", "x", "--p", "9"]),
        Some(2)
    );
    assert_eq!(
        code(&["analyze", "--f", "2*x+1", "--g", "x", "--p", "2"]),
        Some(2)
    );
    assert_eq!(
        code(&["analyze", "--f", "x^2+", "--g", "x", "--p", "2"]),
        Some(1)
    );
    assert_eq!(code(&["analyze", "--f", "x", "--p", "2"]), Some(1));
    assert_eq!(code(&["nonsense"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["resolution", "--omega", "3/2", "--p", "2"]), Some(1));
    assert_eq!(code(&["corpus", "--degree-max", "5"]), Some(1));
    assert_eq!(
        code(&[
            "corpus",
            "--count",
            "3",
            "--out",
            "/nonexistent/dir/x.jsonl"
        ]),
        Some(1)
    );
    assert_eq!(
        code(&[
            "tree-min",
            "--p",
            "2",
            "--omega-a",
            "9",
            "--omega-b",
            "1",
            "--depth",
            "3"
        ]),
        Some(1)
    );
}

#[test]
fn parse_error_reports_offset() {
    let out = resval(&["analyze", "--f", "x+1.5", "--g", "x", "--p", "2"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("byte 3"), "{err}");
}

#[test]
fn resolution_command() {
    assert_eq!(
        json(&[
            "resolution",
            "--omega",
            "3",
            "--p",
            "2",
            "--kind",
            "integral"
        ])["terms"],
        serde_json::json!([2, 1])
    );
    assert_eq!(
        json(&["resolution", "--omega", "4", "--p", "2", "--kind", "real"])["terms"],
        serde_json::json!(["8/3", "4/3"])
    );
    assert_eq!(
        json(&["resolution", "--omega", "1", "--p", "3"])["terms"],
        serde_json::json!([1])
    );
    assert_eq!(
        json(&["resolution", "--omega", "7/2", "--p", "2", "--kind", "real"])["terms"],
        serde_json::json!(["7/3", "7/6"])
    );
}

#[test]
fn construct_and_tree_min() {
    let v = json(&["construct", "--p", "2", "--k1", "0", "--k2", "0"]);
    assert_eq!(v["f_text"], "x^2+5*x+6");
    assert_eq!(v["g_text"], "x^2+x");
    assert_eq!(v["report"]["vp_r"], 2);
    assert_eq!(v["attained"], true);
    let v = json(&[
        "tree-min",
        "--p",
        "2",
        "--omega-a",
        "3",
        "--omega-b",
        "3",
        "--depth",
        "2",
    ]);
    assert_eq!(v["minimum"], "6");
    assert_eq!(v["matches_theorem"], true);
}

#[test]
fn chi_sum_command() {
    let v = json(&[
        "chi-sum",
        "--f",
        "(x+2)*(x+3)",
        "--g",
        "x*(x+1)",
        "--p",
        "2",
    ]);
    assert_eq!(v["chi_sum"], "2");
    assert_eq!(v["vp_r"], 2);
    let v = json(&[
        "chi-sum",
        "--f",
        "(x+2)*(x+3)",
        "--g",
        "x*(x+1)",
        "--p",
        "2",
        "--max-t",
        "0",
    ]);
    assert_eq!(v["chi_sum"], "0");
}

#[test]
fn text_format() {
    let out = resval(&["resolution", "--omega", "3", "--p", "2", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("terms: [2, 1]"), "{text}");
}

#[test]
fn corpus_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for path in [&a, &b] {
        let v = json(&[
            "corpus",
            "--count",
            "500",
            "--seed",
            "1",
            "--primes",
            "2,3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(v["records"], 500);
        assert_eq!(v["violations"], 0);
        assert_eq!(v["invariant_failures"], 0);
    }
    let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(a, b);
    let lines: Vec<Value> = a
        .split(|&c| c == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 500);
    for r in &lines {
        assert_eq!(r["violated"], false);
        for key in [
            "f",
            "g",
            "p",
            "s1",
            "s2",
            "S",
            "vp_r",
            "bound_with_S_integral",
            "gaps",
        ] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn corpus_single_and_exhaustive() {
    let v = json(&["corpus", "--count", "1", "--seed", "9"]);
    assert_eq!(v["records"], 1);
    let v = json(&[
        "corpus",
        "--exhaustive",
        "--degree-max",
        "1",
        "--coeff-bound",
        "1",
        "--primes",
        "2",
    ]);
    assert_eq!(v["records"], 6);
    assert_eq!(v["skipped_zero_resultant"], 3);
}

fn monic() -> impl Strategy<Value = Polynomial> {
    (0usize..=6)
        .prop_flat_map(|d| prop::collection::vec(-1000i64..=1000, d))
        .prop_map(|mut c| {
            c.push(1);
            Polynomial::from_i64s(&c)
        })
}

fn any_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-1000i64..=1000, 0..=7).prop_map(|c| Polynomial::from_i64s(&c))
}

proptest! {
    #[test]
    fn render_parse_round_trip(f in any_poly()) {
        prop_assert_eq!(parse_polynomial(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn list_form_round_trip(f in monic()) {
        let list: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
        prop_assert_eq!(parse_polynomial(&format!("[{}]", list.join(","))).unwrap(), f);
    }
}
