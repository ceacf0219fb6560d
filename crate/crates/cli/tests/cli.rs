use std::path::Path;
use std::process::{Command, Output};

fn splint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splint"))
        .args(args)
        .env_remove("SPLINT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

#[test]
fn roots_of_g2() {
    let o = splint(&["roots", "--algebra", "G2", "--format", "json", "--no-cache"]);
    assert!(o.status.success());
    let rec = &json_lines(&o)[0];
    assert_eq!(rec["positive_roots"].as_array().unwrap().len(), 6);
    assert_eq!(rec["dual_coxeter"][0], 4);
    let o = splint(&["roots", "--algebra", "A1", "--format", "json", "--no-cache"]);
    assert_eq!(
        json_lines(&o)[0]["positive_roots"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn invalid_algebra_is_a_usage_error() {
    let o = splint(&["roots", "--algebra", "X9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--algebra"));
}

#[test]
fn config_errors_are_reported_together() {
    let o = splint(&[
        "strings",
        "--algebra",
        "Q4",
        "--weight",
        "x",
        "--grade-max",
        "-3",
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--algebra"), "{err}");
    assert!(err.contains("--weight"), "{err}");
    assert!(err.contains("--grade-max"), "{err}");
}

#[test]
fn branch_adjoint_of_g2() {
    let o = splint(&[
        "branch",
        "--algebra",
        "G2",
        "--splint",
        "A2A2",
        "--weight",
        "0,1",
        "--oracle",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let recs = json_lines(&o);
    let mut dims: Vec<u64> = recs
        .iter()
        .filter(|r| r["record"] == "branch-term")
        .map(|r| r["dimension"].as_u64().unwrap() * r["multiplicity"].as_u64().unwrap())
        .collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![3, 3, 8]);
    let summary = recs
        .iter()
        .find(|r| r["record"] == "branch-summary")
        .unwrap();
    assert_eq!(summary["match"], true);
    assert_eq!(summary["total_dimension"], 14);
}

#[test]
fn branch_trivial_weight() {
    let o = splint(&[
        "branch", "--splint", "G2:A2A2", "--weight", "0,0", "--format", "json",
    ]);
    assert!(o.status.success());
    let terms: Vec<_> = json_lines(&o)
        .into_iter()
        .filter(|r| r["record"] == "branch-term")
        .collect();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["labels"], serde_json::json!([0, 0]));
}

#[test]
fn unknown_splint_lists_catalog() {
    let o = splint(&["branch", "--splint", "G2:B2B2", "--weight", "1,0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("G2:A2A2") && err.contains("B2:A1A1"), "{err}");
}

#[test]
fn strings_of_basic_a1_module() {
    let o = splint(&[
        "strings",
        "--algebra",
        "A1",
        "--level",
        "1",
        "--weight",
        "0",
        "--grade-max",
        "5",
        "--no-cache",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let recs = json_lines(&o);
    let zero = recs
        .iter()
        .find(|r| r["labels"] == serde_json::json!([0]))
        .unwrap();
    assert_eq!(zero["coefficients"], serde_json::json!([1, 1, 2, 3, 5, 7]));

    let o = splint(&[
        "strings",
        "--algebra",
        "A1",
        "--level",
        "1",
        "--weight",
        "0",
        "--grade-max",
        "0",
        "--no-cache",
    ]);
    let text = stdout(&o);
    let rows: Vec<_> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 1, "{text}");
}

#[test]
fn strings_matrix_is_consistent() {
    let o = splint(&[
        "strings",
        "--algebra",
        "A1",
        "--level",
        "2",
        "--weight",
        "1",
        "--grade-max",
        "4",
        "--emit",
        "matrix",
        "--no-cache",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let m = json_lines(&o)
        .into_iter()
        .find(|r| r["record"] == "multiplicity-matrix")
        .unwrap();
    assert_eq!(m["consistent"], true);
}

#[test]
fn qdim_basic_module() {
    let o = splint(&[
        "qdim",
        "--algebra",
        "A1",
        "--level",
        "1",
        "--weight",
        "0",
        "--grade-max",
        "2",
        "--oracle",
        "--no-cache",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let r = &json_lines(&o)[0];
    assert_eq!(r["coefficients"][0], 1);
    assert_eq!(r["coefficients"][1], 3);
    assert_eq!(r["match"], true);
}

#[test]
fn level_violation_is_rejected() {
    let o = splint(&[
        "qdim",
        "--algebra",
        "A1",
        "--level",
        "1",
        "--weight",
        "2",
        "--no-cache",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_catalog_identities() {
    let o = splint(&[
        "verify",
        "--identity",
        "denominator",
        "--splint",
        "G2:A2A2",
        "--grade-max",
        "6",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = splint(&[
        "verify",
        "--identity",
        "eq6",
        "--splint",
        "B2:A1A1",
        "--grade-max",
        "4",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    assert_eq!(json_lines(&o)[0]["passed"], true);
}

const CORRUPT: &str = r#"
[[splint]]
name = "A1A1"
ambient = "B2"
subalgebra = "A1xA1"
stem = "A1xA1"
phi1 = [[1, 0], [1, 2]]
phi2 = [[1, 1], [1, 0]]
correspondence = [0, 1]
"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn corrupted_splint_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.toml", CORRUPT);
    let o = splint(&[
        "verify",
        "--identity",
        "denominator",
        "--splint-file",
        &file,
        "--grade-max",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first mismatch"), "{}", stdout(&o));
    let o = splint(&["splint", "check", "--splint-file", &file]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn warm_cache_output_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "affine-branch",
        "--splint",
        "B2:A1A1",
        "--weight",
        "0,0",
        "--level",
        "1",
        "--grade-max",
        "2",
        "--oracle",
        "--cache-dir",
        cache,
        "--format",
        "json",
    ];
    let cold = splint(&args);
    assert!(cold.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let warm = splint(&args);
    assert_eq!(cold.stdout, warm.stdout);
    for r in json_lines(&warm) {
        let text = serde_json::to_string(&r).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_splint"))
        .args([
            "qdim",
            "--algebra",
            "A1",
            "--weight",
            "1",
            "--grade-max",
            "2",
        ])
        .env("SPLINT_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn corrupted_cache_file_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "strings",
        "--algebra",
        "A1",
        "--weight",
        "1",
        "--grade-max",
        "3",
        "--cache-dir",
        cache,
    ];
    let cold = splint(&args);
    let entry = std::fs::read_dir(dir.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    std::fs::write(&entry, "splint-cache 1\ngarbage\n").unwrap();
    let again = splint(&args);
    assert_eq!(cold.stdout, again.stdout);
    assert!(std::fs::read_to_string(&entry)
        .unwrap()
        .contains("layers 4"));
}
