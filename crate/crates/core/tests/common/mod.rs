#![allow(dead_code)]

pub mod oracle;

use cellua::ingest::{build_paper_quiver_example, matrix_algebra, matrix_alpha};
use cellua::{Algebra, AlphaDatum, Field};

pub fn path(field: Field) -> (Algebra, AlphaDatum) {
    build_paper_quiver_example(field).expect("path example builds")
}

pub fn matrix(n: usize, b: usize) -> (Algebra, AlphaDatum) {
    let f = Field::Rational;
    (matrix_algebra(n, f).unwrap(), matrix_alpha(n, b, f).unwrap())
}

/// Every built-in with an α datum: the path example and `matrix:n,b` for n <= 5.
pub fn builtins() -> Vec<(String, Algebra, AlphaDatum)> {
    let (a, d) = path(Field::Rational);
    let mut out = vec![("path-example".to_string(), a, d)];
    for n in 2..=5 {
        for b in 2..=n {
            let (a, d) = matrix(n, b);
            out.push((format!("matrix:n={n},b={b}"), a, d));
        }
    }
    out
}
