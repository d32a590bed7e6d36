//! The files under `data/` are generated from the built-ins. Run with
//! `CELLUA_BLESS=1` to rewrite them.

use std::path::PathBuf;

use cellua::ingest::{load_file, paper_quiver_file, serialize_cell_json, Builtin};
use cellua::Field;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn expected() -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    for (file, spec) in [
        ("path-example.cell.json", "path-example"),
        ("matrix-n4-b2.cell.json", "matrix:n=4,b=2"),
        ("matrix-n3.cell.json", "matrix:n=3"),
    ] {
        let b: Builtin = spec.parse().unwrap();
        let (a, d) = b.build(Field::Rational).unwrap();
        out.push((file, serialize_cell_json(&a, d.as_ref())));
    }
    let q = serde_json::to_string_pretty(&paper_quiver_file()).unwrap() + "\n";
    out.push(("path-example.quiver.json", q));
    out
}

#[test]
fn data_files_match_builtins() {
    let bless = std::env::var_os("CELLUA_BLESS").is_some();
    for (file, text) in expected() {
        let path = data_dir().join(file);
        if bless {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{file} is stale; rerun with CELLUA_BLESS=1");
    }
}

#[test]
fn data_files_load_back() {
    for (file, spec) in [
        ("path-example.cell.json", "path-example"),
        ("path-example.quiver.json", "path-example"),
        ("matrix-n4-b2.cell.json", "matrix:n=4,b=2"),
    ] {
        let (a, d) = load_file(&data_dir().join(file)).unwrap();
        let (b, e) = spec.parse::<Builtin>().unwrap().build(Field::Rational).unwrap();
        assert_eq!(a.dim(), b.dim(), "{file}");
        assert!(a.verify_cellular().is_ok(), "{file}");
        assert_eq!(d.is_some(), e.is_some(), "{file}");
        let da = cellua::repth::decomposition_matrix(&a, cellua::Side::Right).unwrap();
        let db = cellua::repth::decomposition_matrix(&b, cellua::Side::Right).unwrap();
        assert!(da.same_numbers(&db), "{file}");
    }
}
