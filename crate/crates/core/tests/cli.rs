use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bhht_core::cli::catalog_merge;
use bhht_core::cli::result::CatalogRecord;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn bhht(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhht"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_duality_on_twin_loops() {
    let ex = fixture("twin_a.json");
    let o = bhht(&["verify-duality", "--format", "structured", path_str(&ex)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["duality_equal"], true);
    assert_eq!(doc["dual"]["reduced"], 8);
    assert_eq!(doc["reduced"], -8);
    assert!(doc.get("timings").is_none());
}

#[test]
fn euler_on_fermat_quadric() {
    let o = bhht(&[
        "euler",
        "--format",
        "structured",
        path_str(&fixture("fermat2.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["reduced"], 1);
    assert!(doc.get("duality_equal").is_none());
}

#[test]
fn invalid_inputs_exit_2() {
    let o = bhht(&["validate", path_str(&fixture("degenerate.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
    let o = bhht(&["validate", path_str(&fixture("flip.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("flip"));
    let o = bhht(&["validate", "/nonexistent/instance.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bhht(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_cap_exits_3() {
    let ex = fixture("twin_a.json");
    let o = bhht(&[
        "euler",
        "--oracle",
        "--max-oracle-order",
        "10",
        path_str(&ex),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = bhht(&["euler", "--oracle", "--format", "structured", path_str(&ex)]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["oracle"]["value"], -8);
    assert_eq!(doc["oracle"]["agrees"], true);
}

#[test]
fn oracle_check_reports_every_check() {
    let o = bhht(&[
        "oracle-check",
        "--format",
        "structured",
        path_str(&fixture("twin_b.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.len() >= 8);
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(doc["oracle"]["value"], 16);
}

#[test]
fn groups_and_transpose() {
    let ex = fixture("twin_a.json");
    let o = bhht(&["symmetry-group", "--format", "structured", path_str(&ex)]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["order"], 1125);
    let o = bhht(&["dual-group", "--format", "structured", path_str(&ex)]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["order"], 25);
    let o = bhht(&["transpose", "--format", "structured", path_str(&ex)]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["monomials"][0], serde_json::json!([4, 1, 0, 0, 0]));
}

fn catalog_input(dir: &Path) -> PathBuf {
    let mut text = String::new();
    for f in ["twin_a.json", "twin_b.json", "fermat2.json", "degenerate.json"] {
        text.push_str(std::fs::read_to_string(fixture(f)).unwrap().trim());
        text.push('\n');
    }
    text.push_str("not json\n");
    let p = dir.join("input.jsonl");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn catalog_is_deterministic_and_records_failures() {
    let dir = tempfile::tempdir().unwrap();
    let input = catalog_input(dir.path());
    let out1 = dir.path().join("a.jsonl");
    let out2 = dir.path().join("b.jsonl");
    for out in [&out1, &out2] {
        let o = bhht(&["catalog", path_str(&input), "--output", path_str(out)]);
        assert_eq!(o.status.code(), Some(2));
    }
    let a = std::fs::read(&out1).unwrap();
    assert_eq!(a, std::fs::read(&out2).unwrap());
    let lines: Vec<&str> = std::str::from_utf8(&a).unwrap().lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].contains("\"name\":\"twin_a\""));
    assert!(lines[3].contains("\"exit_code\":2"));
    assert!(lines[4].contains("\"line\":5"));
}

#[test]
fn catalog_merge_dedups_and_detects_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.jsonl");
    std::fs::write(
        &input,
        std::fs::read_to_string(fixture("twin_a.json")).unwrap(),
    )
    .unwrap();
    let first = dir.path().join("first.jsonl");
    assert_eq!(
        bhht(&["catalog", path_str(&input), "--output", path_str(&first)])
            .status
            .code(),
        Some(0)
    );
    let merged = dir.path().join("merged.jsonl");
    let o = bhht(&[
        "catalog",
        path_str(&input),
        "--merge",
        path_str(&first),
        "--output",
        path_str(&merged),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&merged).unwrap(),
        std::fs::read(&first).unwrap()
    );

    let tampered = dir.path().join("tampered.jsonl");
    let text = std::fs::read_to_string(&first)
        .unwrap()
        .replace("\"reduced\":-8", "\"reduced\":-9");
    std::fs::write(&tampered, text).unwrap();
    let o = bhht(&[
        "catalog",
        path_str(&input),
        "--merge",
        path_str(&tampered),
        "--output",
        path_str(&merged),
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("conflict"));
}

#[test]
fn merge_of_disjoint_streams_is_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let mut streams = Vec::new();
    for f in ["twin_a.json", "twin_b.json"] {
        let out = dir.path().join(format!("{f}.out"));
        bhht(&["catalog", path_str(&fixture(f)), "--output", path_str(&out)]);
        let text = std::fs::read_to_string(&out).unwrap();
        let records: Vec<CatalogRecord> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        streams.push(records);
    }
    let b = streams.pop().unwrap();
    let a = streams.pop().unwrap();
    let merged = catalog_merge(a.clone(), b.clone()).unwrap();
    assert_eq!(merged.len(), 2);
    let hashes: Vec<_> = merged
        .iter()
        .map(|r| r.hash().unwrap().to_string())
        .collect();
    let mut sorted = hashes.clone();
    sorted.sort();
    assert_eq!(hashes, sorted);
    assert_eq!(catalog_merge(b, a).unwrap(), merged);
}

#[test]
fn timings_only_on_request() {
    let o = bhht(&[
        "euler",
        "--timings",
        "--format",
        "structured",
        path_str(&fixture("fermat2.json")),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["timings"]["total_ms"].is_number());
}
