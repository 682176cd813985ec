//! Binary-level tests: exit codes, output determinism, the import/export
//! round trip, and the Sp(6,q) import-then-evaluate flow.

use std::path::Path;
use std::process::{Command, Output};

fn whitney(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whitney"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("WHITNEY_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn gen_cyclic_8() {
    let dir = tempfile::tempdir().unwrap();
    let out = whitney(dir.path(), &["gen", "cyclic", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("order 8"), "{text}");
    assert!(text.contains("8 conjugacy classes"), "{text}");
}

#[test]
fn gen_sl2_5_reports_classes_and_census() {
    let dir = tempfile::tempdir().unwrap();
    let out = whitney(dir.path(), &["gen", "sl2", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order 120"), "{text}");
    assert!(text.contains("9 conjugacy classes"), "{text}");
    assert!(text.contains("5 orthogonal"), "{text}");
    assert!(text.contains("4 symplectic"), "{text}");
}

#[test]
fn gen_sp6_refuses_with_budget_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = whitney(dir.path(), &["gen", "sp6", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("9170703360"), "{err}");
    assert!(err.contains("import-chartab"), "{err}");
}

#[test]
fn deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = whitney(dir.path(), &["gen", "sl2", "3"]);
    // second run reads the cache; byte-identical output required
    let second = whitney(dir.path(), &["gen", "sl2", "3"]);
    assert_eq!(stdout(&first), stdout(&second));
    let swc1 = whitney(dir.path(), &["swc", "sl2", "3", "--all-orthogonal", "--format", "json"]);
    let swc2 = whitney(dir.path(), &["swc", "sl2", "3", "--all-orthogonal", "--format", "json"]);
    assert_eq!(out_pair(&swc1), out_pair(&swc2));
}

fn out_pair(o: &Output) -> (Option<i32>, String) {
    (o.status.code(), stdout(o))
}

#[test]
fn swc_all_orthogonal_sl2_7() {
    let dir = tempfile::tempdir().unwrap();
    let out = whitney(dir.path(), &["swc", "sl2", "7", "--all-orthogonal"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // the corollary: every orthogonal irreducible has trivial total class
    for line in text.lines() {
        assert!(line.ends_with("w = 1"), "{line}");
    }
    assert!(text.lines().count() >= 3);
}

#[test]
fn swc_selector_errors() {
    let dir = tempfile::tempdir().unwrap();
    // row selection of a symplectic row is a validation error (exit 1)
    let t = whitney(dir.path(), &["gen", "sl2", "3"]);
    assert_eq!(t.status.code(), Some(0));
    // find the symplectic row through csv output of a doubled row scan:
    // row 5 is symplectic for SL(2,3) under the engine's canonical order,
    // but discover it robustly by trying rows until the error names fs = -1
    let mut found = false;
    for i in 0..7 {
        let out = whitney(dir.path(), &["swc", "sl2", "3", "--row", &i.to_string()]);
        if out.status.code() == Some(1) && stderr(&out).contains("fs = -1") {
            // the doubled version must succeed
            let doubled = whitney(
                dir.path(),
                &["swc", "sl2", "3", "--doubled-row", &i.to_string()],
            );
            assert_eq!(doubled.status.code(), Some(0));
            assert!(stdout(&doubled).contains("w = 1 + e"), "{}", stdout(&doubled));
            found = true;
        }
    }
    assert!(found, "no symplectic row surfaced the doubling hint");
    // out-of-range selector
    let out = whitney(dir.path(), &["swc", "sl2", "3", "--row", "99"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn swc_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = whitney(
        dir.path(),
        &["swc", "sl2", "4", "--all-orthogonal", "--format", "csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "selector,degree,fs,theorem,exponents,total_class"
    );
    // SL(2,4) = A_5: five orthogonal rows
    assert_eq!(lines.count(), 5);
    assert!(text.contains("sl2_even"));
}

#[test]
fn verify_sl2_3_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = whitney(dir.path(), &["verify", "sl2", "3", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("all suites pass"), "{text}");
}

#[test]
fn verify_sl2_8_dickson_vs_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = whitney(
        dir.path(),
        &["verify", "sl2", "8", "--suites", "restriction"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn verify_sp6_synthetic() {
    let dir = tempfile::tempdir().unwrap();
    let out = whitney(
        dir.path(),
        &["verify", "sp6", "--synthetic", "--trials", "100", "--seed", "7"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("synthetic_sp_identity(n=3)"));
}

#[test]
fn export_import_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl2_3.json");
    let out = whitney(
        dir.path(),
        &["export-chartab", "sl2", "3", "-o", path.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let imported = whitney(dir.path(), &["import-chartab", path.to_str().unwrap()]);
    assert_eq!(imported.status.code(), Some(0), "{}", stderr(&imported));
    assert!(stdout(&imported).contains("SL(2,3)"));

    // corrupt the file: a wrong value must be rejected with exit 1
    let mut file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = file["irreducibles"].as_array_mut().unwrap();
    let last = rows.len() - 1;
    let old = rows[last]["values"][0].as_i64().unwrap();
    rows[last]["values"][0] = serde_json::json!(old + 1);
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, serde_json::to_string(&file).unwrap()).unwrap();
    let rejected = whitney(dir.path(), &["import-chartab", bad_path.to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(1));
    assert!(stderr(&rejected).contains("orthogonality"), "{}", stderr(&rejected));
}

#[test]
fn sp6_import_then_swc_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sp6_model.json");
    whitney_cli::write_synthetic_sp6_table(&path, 3).unwrap();
    let imported = whitney(dir.path(), &["import-chartab", path.to_str().unwrap()]);
    assert_eq!(imported.status.code(), Some(0), "{}", stderr(&imported));
    assert!(stdout(&imported).contains("Sp(6,3)"));

    // 4 copies of every linear character: exponents r = s = t = 1
    let sum_spec = (0..8).map(|i| format!("{i}:4")).collect::<Vec<_>>().join(",");
    let out = whitney(dir.path(), &["swc", "sp6", "3", "--sum", &sum_spec]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("theorem sp6"), "{text}");
    assert!(text.contains("r=1;s=1;t=1"), "{text}");

    // without an imported table the evaluator refuses with the budget hint
    let fresh = tempfile::tempdir().unwrap();
    let refused = whitney(fresh.path(), &["swc", "sp6", "3", "--sum", &sum_spec]);
    assert_eq!(refused.status.code(), Some(3));
}

#[test]
fn sum_selector_additivity() {
    let dir = tempfile::tempdir().unwrap();
    // trivial + trivial on C_4: still w = 1 + nothing? trivial^2 has b = 0
    // and trivial determinant, so w = 1
    let out = whitney(dir.path(), &["swc", "cyclic", "4", "--sum", "3:2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}
