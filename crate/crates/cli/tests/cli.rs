use std::process::{Command, Output};

use serde_json::Value;

fn qcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcode"))
        .args(args)
        .output()
        .expect("run qcode")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

const EX1: [&str; 8] = ["--p", "3", "--m", "4", "--preset", "square:u=1", "--alpha", "1"];

#[test]
fn analyze_preset_reports_rank_and_sign() {
    let out = qcode(&["analyze", "--p", "3", "--m", "4", "--preset", "square:u=1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["rank"], 4);
    assert_eq!(v["sign"], -1);
    assert_eq!(v["kernel_dimension"], 0);
    assert_eq!(v["preset_check"]["agrees"], true);
}

#[test]
fn analyze_coefficients_over_gf9() {
    let out = qcode(&["analyze", "--p", "3", "--m", "2", "--coeffs", "2,0"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["gram"], serde_json::json!([[1, 0], [0, 2]]));
    assert_eq!(v["rank"], 2);
}

#[test]
fn build_reports_code_parameters() {
    let mut args = vec!["build"];
    args.extend(EX1);
    let out = qcode(&args);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["length"], 29);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["min_distance"], 18);
    assert_eq!(v["enumerator"], "1+44z^18+30z^21+6z^24");
    assert_eq!(v["weight_distribution"]["18"], 44);
}

#[test]
fn predict_and_verify_agree() {
    let mut args = vec!["predict"];
    args.extend(EX1);
    let out = qcode(&args);
    assert!(out.status.success());
    let predicted = json(&out);

    let mut args = vec!["verify"];
    args.extend(EX1);
    let out = qcode(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["match"], true);
    assert_eq!(v["case"]["case"], "even-nonzero");
    assert_eq!(
        predicted["summary"]["enumerator"],
        v["computed"]["enumerator"]
    );
}

#[test]
fn csv_generator_matrix_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let mut args = vec!["--format", "csv", "--out", path.to_str().unwrap(), "build"];
    args.extend(EX1);
    let out = qcode(&args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<Vec<u32>> = text
        .lines()
        .map(|l| l.split(' ').map(|d| d.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == 29 && r.iter().all(|&d| d < 3)));
}

#[test]
fn text_format_is_plain() {
    let mut args = vec!["--format", "text", "build"];
    args.extend(EX1);
    let out = qcode(&args);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("1+44z^18+30z^21+6z^24"));
    assert!(serde_json::from_str::<Value>(&s).is_err());
}

#[test]
fn invalid_parameters_exit_with_error_json() {
    for (args, kind) in [
        (vec!["build", "--p", "4", "--m", "2", "--coeffs", "1,0", "--alpha", "1"], "NonPrime"),
        (vec!["build", "--p", "3", "--m", "4", "--preset", "square:u=0", "--alpha", "1"], "ZeroU"),
        (vec!["predict", "--p", "3", "--m", "4", "--preset", "square:u=1", "--alpha", "0"], "ZeroAlpha"),
        (vec!["predict", "--p", "3", "--m", "2", "--coeffs", "0,0", "--alpha", "1"], "DegenerateForm"),
        (vec!["build", "--p", "3", "--m", "2", "--preset", "square:u=1", "--alpha", "1"], "DimensionCollapse"),
    ] {
        let out = qcode(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["error"], kind, "{args:?}");
        assert!(err["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
}

#[test]
fn coeffs_and_preset_are_exclusive() {
    let out = qcode(&[
        "analyze", "--p", "3", "--m", "2", "--coeffs", "1,0", "--preset", "square:u=1",
    ]);
    assert!(!out.status.success());
}

#[test]
fn lemma_sweep_is_deterministic() {
    let args = [
        "lemmas", "--p", "3", "--m", "3", "--trials", "50", "--seed", "7", "--lemma", "zero-count",
    ];
    let a = qcode(&args);
    let b = qcode(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["all_equal"], true);
}

#[test]
fn lemma_sweep_rejects_unknown_identity() {
    let out = qcode(&["lemmas", "--seed", "1", "--lemma", "no-such-thing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theorem_sweep_small() {
    let out = qcode(&["sweep", "--p", "3", "--m", "2,3", "--trials", "12", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_match"], true);
    assert_eq!(v["records"].as_array().unwrap().len(), 12);
}

#[test]
fn examples_flag_discrepancies() {
    let out = qcode(&["examples", "--id", "ex9"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"], "mismatch");
    assert_eq!(v["swapped_m"]["reconciles"], true);
}
