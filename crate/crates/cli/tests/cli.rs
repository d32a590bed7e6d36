use std::path::PathBuf;
use std::process::{Command, Output};

use cellua::ingest::{build_paper_quiver_example, serialize_cell_json};
use cellua::Field;

fn cellua(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellua")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn alpha_dims_for_matrix() {
    let o = cellua(&["alpha", "--builtin", "matrix:n=4,b=2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("levi 10\n") && s.contains("parabolic 13\n") && s.contains("quotient 9\n"), "{s}");
}

#[test]
fn decomp_prints_path_table() {
    let o = cellua(&["decomp", "--builtin", "path-example", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        ",λ1,λ2,λ3,λ4,λ5\nλ0,1,0,0,0,0\nλ1,1,1,0,0,0\nλ2,0,1,1,0,0\nλ3,0,0,1,1,0\nλ4,0,0,0,1,1\nλ5,0,0,0,0,1\n"
    );
    let table = stdout(&cellua(&["decomp", "--builtin", "path-example"]));
    assert_eq!(table.lines().count(), 7);
    assert!(table.lines().nth(4).unwrap().starts_with("λ3  0   0   1   1   0"), "{table}");
}

#[test]
fn decomp_of_constructed_algebras() {
    let o = cellua(&["decomp", "--builtin", "path-example", "--algebra", "levi", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["row_labels"].as_array().unwrap().len(), 7);
    let o = cellua(&["decomp", "--builtin", "path-example", "--algebra", "quotient", "--side", "left"]);
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn missing_file_and_bad_usage_exit_2() {
    let o = cellua(&["verify", "nonexistent.cell.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonexistent.cell.json"));
    assert_eq!(cellua(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cellua(&["verify", "--builtin", "path-example", "--bogus"]).status.code(), Some(2));
    assert_eq!(cellua(&["verify"]).status.code(), Some(2));
    assert_eq!(cellua(&["verify", "--builtin", "matrix:n=4,b=9"]).status.code(), Some(2));
    assert_eq!(cellua(&["verify", "--builtin", "path-example", "--field", "fp:4"]).status.code(), Some(2));
    assert_eq!(cellua(&["alpha", "--builtin", "matrix:n=3"]).status.code(), Some(2));
}

#[test]
fn small_characteristic_is_refused() {
    let o = cellua(&["decomp", "--builtin", "path-example", "--field", "fp:17"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("characteristic 17"));
    let o = cellua(&["decomp", "--builtin", "path-example", "--field", "fp:23"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn files_and_builtins_agree() {
    for (file, builtin) in [
        ("path-example.cell.json", "path-example"),
        ("path-example.quiver.json", "path-example"),
        ("matrix-n4-b2.cell.json", "matrix:n=4,b=2"),
    ] {
        let a = cellua(&["alpha", &data(file)]);
        let b = cellua(&["alpha", "--builtin", builtin]);
        assert_eq!(a.status.code(), Some(0), "{file}");
        assert_eq!(stdout(&a), stdout(&b), "{file}");
    }
    let o = cellua(&["decomp", &data("path-example.cell.json"), "--field", "fp:31", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn broken_algebra_exits_1() {
    let (a, _) = build_paper_quiver_example(Field::Rational).unwrap();
    let n = a.dim();
    let bad = (0..n * n)
        .map(|k| a.with_product(k / n, k % n, vec![(0, Field::Rational.one())]))
        .find(|m| !m.verify_cellular().is_ok() && m.unit_violations().is_empty())
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.cell.json");
    std::fs::write(&path, serialize_cell_json(&bad, None)).unwrap();
    let o = cellua(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("FAIL") && s.contains("  witness: "), "{s}");
    assert!(s.lines().last().unwrap().starts_with("SUMMARY"));
}

#[test]
fn report_suite_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = cellua(&["report", "--builtin", "matrix:n=4,b=2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("CONDITION idempotents-detect-simples HOLDS"));
    assert!(text.trim_end().ends_with(", 0 failed"));

    let o = cellua(&["assumptions", "--builtin", "path-example"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CONDITION idempotents-detect-simples FAILS"));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_cellua"))
            .args(["report", "--builtin", "path-example", "--format", "json"])
            .env("CELLUA_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let auto = run("0");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, auto.stdout);
    assert_eq!(run("many").status.code(), Some(2));
}

#[test]
fn blocks_lists_quotient_classes() {
    let o = cellua(&["blocks", "--builtin", "path-example"]);
    assert!(stdout(&o).contains("quotient {λ1,λ2,λ3} {λ4,λ5}\n"));
    let o = cellua(&["blocks", "--builtin", "matrix:n=3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ambient"].as_array().unwrap().len(), 1);
}
