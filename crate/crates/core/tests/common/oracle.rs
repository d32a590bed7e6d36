//! Composition series by random spinning, independent of the radical.
//!
//! A proper submodule is searched for by spinning random vectors, kernel
//! vectors of random sparse elements, and the same in the dual (whose
//! invariant subspaces give submodules by annihilation). A module where
//! nothing turns up is taken to be simple and then matched against the
//! engine's simples by dimension and a nonzero map; a non-simple module can
//! never pass that match, so a missed split shows up as an error.

use std::collections::BTreeMap;

use cellua::linalg::{ExactMatrix, Scalar, Span};
use cellua::CellModule;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const ATTEMPTS: usize = 60;

fn random_vec(rng: &mut ChaCha8Rng, m: &CellModule) -> Vec<Scalar> {
    let f = m.field();
    (0..m.dim()).map(|_| f.from_i64(rng.random_range(-2..=2))).collect()
}

fn random_element(rng: &mut ChaCha8Rng, m: &CellModule) -> Vec<(usize, Scalar)> {
    let f = m.field();
    let k = rng.random_range(1..=3);
    (0..k)
        .map(|_| {
            let mut c = 0;
            while c == 0 {
                c = rng.random_range(-2..=2);
            }
            (rng.random_range(0..m.algebra_dim()), f.from_i64(c))
        })
        .collect()
}

fn combine(rng: &mut ChaCha8Rng, m: &CellModule, vs: &[Vec<Scalar>]) -> Vec<Scalar> {
    let f = m.field();
    let mut out = vec![f.zero(); m.dim()];
    for v in vs {
        let c = f.from_i64(rng.random_range(-2..=2));
        for (o, x) in out.iter_mut().zip(v) {
            *o = &*o + &(&c * x);
        }
    }
    out
}

fn dual(m: &CellModule) -> CellModule {
    let acts = m.actions().iter().map(ExactMatrix::transpose).collect();
    CellModule::new(format!("{}*", m.label), m.side, m.basis_labels.clone(), m.field(), acts).unwrap()
}

fn proper(s: &Span, d: usize) -> bool {
    s.dim() > 0 && s.dim() < d
}

fn proper_submodule(m: &CellModule, rng: &mut ChaCha8Rng) -> Option<Span> {
    let d = m.dim();
    let md = dual(m);
    for _ in 0..ATTEMPTS {
        let v = random_vec(rng, m);
        let s = m.spin(&[v]);
        if proper(&s, d) {
            return Some(s);
        }
        // row action x -> xA: kernel is the nullspace of the transpose
        let a = random_element(rng, m);
        let act = m.element_action(&a);
        let ker = act.transpose().nullspace();
        if !ker.is_empty() {
            let s = m.spin(&[combine(rng, m, &ker)]);
            if proper(&s, d) {
                return Some(s);
            }
        }
        let dker = act.nullspace();
        if !dker.is_empty() {
            let t = md.spin(&[combine(rng, m, &dker)]);
            if proper(&t, d) {
                let rows = ExactMatrix::from_rows(m.field(), d, t.basis().to_vec()).unwrap();
                return Some(Span::from_vectors(m.field(), d, rows.nullspace()));
            }
        }
    }
    None
}

fn split(m: &CellModule, rng: &mut ChaCha8Rng, out: &mut Vec<CellModule>) {
    if m.dim() == 0 {
        return;
    }
    match proper_submodule(m, rng) {
        Some(s) => {
            assert!(m.is_invariant(&s), "oracle produced a non-invariant subspace of {}", m.label);
            let zero = Span::new(m.field(), m.dim());
            split(&m.subquotient(&s, &zero, format!("{}'", m.label)).unwrap(), rng, out);
            split(&m.quotient(&s, format!("{}''", m.label)).unwrap(), rng, out);
        }
        None => out.push(m.clone()),
    }
}

/// Labelled composition multiplicities of `m`, zero entries omitted.
pub fn composition_factors(
    m: &CellModule,
    simples: &[(String, CellModule)],
    rng: &mut ChaCha8Rng,
) -> Result<BTreeMap<String, usize>, String> {
    let mut factors = Vec::new();
    split(m, rng, &mut factors);
    let mut out = BTreeMap::new();
    for fac in &factors {
        let hit = simples.iter().find(|(_, l)| {
            l.dim() == fac.dim() && cellua::repth::hom_dimension(fac, l).unwrap() > 0
        });
        match hit {
            Some((label, _)) => *out.entry(label.clone()).or_insert(0) += 1,
            None => return Err(format!("factor of dimension {} in {} matches no simple", fac.dim(), m.label)),
        }
    }
    Ok(out)
}
