//! Standard and simple modules of a cell datum, bilinear forms, and
//! quotients by saturated sets of cells.
//!
//! Modules act on row vectors. A right module stores `ρ(a)` with
//! `x·a = x ρ(a)`, so `ρ(ab) = ρ(a)ρ(b)`. A left module stores `λ(a)` with
//! `a·x = x λ(a)`, so `λ(ab) = λ(b)λ(a)`. With this convention submodules,
//! quotients and intertwiners are computed by the same code on both sides.

use std::fmt;

use crate::algebra::{Algebra, AlgebraElement, CellDatum, Table};
use crate::error::{Error, Result};
use crate::linalg::{unit_vec, zero_vec, Basis, ExactMatrix, Field, Scalar, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Side> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Parse(format!("unknown side {s:?}"))),
        }
    }
}

/// A module given by one action matrix per algebra basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellModule {
    pub label: String,
    pub side: Side,
    pub basis_labels: Vec<String>,
    field: Field,
    action: Vec<ExactMatrix>,
}

impl CellModule {
    pub fn new(
        label: String,
        side: Side,
        basis_labels: Vec<String>,
        field: Field,
        action: Vec<ExactMatrix>,
    ) -> Result<Self> {
        let d = basis_labels.len();
        for m in &action {
            if m.rows() != d || m.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix {}x{} on a module of dimension {d}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field,
                    found: m.field(),
                });
            }
        }
        Ok(CellModule {
            label,
            side,
            basis_labels,
            field,
            action,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of algebra basis elements acting.
    pub fn algebra_dim(&self) -> usize {
        self.action.len()
    }

    pub fn action(&self, pos: usize) -> &ExactMatrix {
        &self.action[pos]
    }

    pub fn actions(&self) -> &[ExactMatrix] {
        &self.action
    }

    /// Matrix of a general element `Σ a_i c_i`.
    pub fn element_action(&self, a: &[(usize, Scalar)]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.field, self.dim(), self.dim());
        for (p, c) in a {
            m = m.add(&self.action[*p].scale(c)).expect("same shape");
        }
        m
    }

    /// `x` acted on by basis element `pos`.
    pub fn act(&self, x: &[Scalar], pos: usize) -> Vec<Scalar> {
        self.action[pos].vec_mul(x).expect("vector of module dimension")
    }

    /// Checks that the matrices represent the algebra on this side. Returns
    /// the first failing pair of basis elements.
    pub fn representation_witness(&self, alg: &Algebra) -> Option<(usize, usize)> {
        let n = alg.dim();
        if self.action.len() != n {
            return Some((n, n));
        }
        for i in 0..n {
            for j in 0..n {
                let prod = self.element_action(alg.mul_basis(i, j));
                let composed = match self.side {
                    Side::Right => self.action[i].mul(&self.action[j]),
                    Side::Left => self.action[j].mul(&self.action[i]),
                }
                .expect("square matrices");
                if prod != composed {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Whether `span` is closed under the action.
    pub fn is_invariant(&self, span: &Span) -> bool {
        span.basis()
            .iter()
            .all(|v| (0..self.action.len()).all(|p| span.contains(&self.act(v, p))))
    }

    /// Smallest submodule containing `vectors`.
    pub fn spin(&self, vectors: &[Vec<Scalar>]) -> Span {
        let mut span = Span::new(self.field, self.dim());
        let mut queue: Vec<Vec<Scalar>> = Vec::new();
        for v in vectors {
            if span.insert(v.clone()) {
                queue.push(v.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for p in 0..self.action.len() {
                let w = self.act(&v, p);
                if span.insert(w.clone()) {
                    queue.push(w);
                }
            }
            if span.is_full() {
                break;
            }
        }
        span
    }

    /// Restriction along a map of algebras sending basis element `p` of the
    /// new algebra to `images[p]` in this module's algebra.
    pub fn pull_back(&self, images: &[Vec<(usize, Scalar)>]) -> CellModule {
        CellModule {
            label: self.label.clone(),
            side: self.side,
            basis_labels: self.basis_labels.clone(),
            field: self.field,
            action: images.iter().map(|a| self.element_action(a)).collect(),
        }
    }

    /// Restriction to a subalgebra whose basis element `p` is basis element
    /// `embed[p]` here.
    pub fn restrict(&self, embed: &[usize]) -> CellModule {
        CellModule {
            label: self.label.clone(),
            side: self.side,
            basis_labels: self.basis_labels.clone(),
            field: self.field,
            action: embed.iter().map(|&p| self.action[p].clone()).collect(),
        }
    }

    /// The module on `upper / lower`. The basis is a complement of `lower`
    /// in `upper`, chosen greedily from the reduced basis of `upper`.
    pub fn subquotient(&self, upper: &Span, lower: &Span, label: String) -> Result<CellModule> {
        if !upper.contains_span(lower) {
            return Err(Error::Internal("subquotient: lower not inside upper".into()));
        }
        let mut acc = lower.clone();
        let mut complement = Vec::new();
        for v in upper.basis() {
            if acc.insert(v.clone()) {
                complement.push(v.clone());
            }
        }
        self.quotient_on(lower, complement, label)
    }

    /// `self / lower` with the complement taken from the standard unit
    /// vectors, lexicographically first.
    pub fn quotient(&self, lower: &Span, label: String) -> Result<CellModule> {
        let mut acc = lower.clone();
        let mut complement = Vec::new();
        for i in 0..self.dim() {
            let e = unit_vec(self.field, self.dim(), i);
            if acc.insert(e.clone()) {
                complement.push(e);
            }
        }
        self.quotient_on(lower, complement, label)
    }

    fn quotient_on(&self, lower: &Span, complement: Vec<Vec<Scalar>>, label: String) -> Result<CellModule> {
        let k = lower.dim();
        let mut vectors: Vec<Vec<Scalar>> = lower.basis().to_vec();
        vectors.extend(complement.iter().cloned());
        let basis = Basis::new(self.field, self.dim(), vectors)?;
        let d = complement.len();
        let mut action = Vec::with_capacity(self.action.len());
        for p in 0..self.action.len() {
            let mut rows = Vec::with_capacity(d);
            for v in &complement {
                let w = self.act(v, p);
                let c = basis
                    .coords(&w)
                    .ok_or_else(|| Error::Internal(format!("subquotient of {} is not invariant", self.label)))?;
                rows.push(c[k..].to_vec());
            }
            action.push(ExactMatrix::from_rows(self.field, d, rows)?);
        }
        let basis_labels = complement
            .iter()
            .map(|v| describe_vector(v, &self.basis_labels))
            .collect();
        CellModule::new(label, self.side, basis_labels, self.field, action)
    }

    pub fn direct_sum(&self, other: &CellModule, label: String) -> Result<CellModule> {
        if self.side != other.side || self.action.len() != other.action.len() {
            return Err(Error::SideMismatch(format!(
                "{} ({}) and {} ({})",
                self.label, self.side, other.label, other.side
            )));
        }
        let (a, b) = (self.dim(), other.dim());
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(x, y)| {
                let mut m = ExactMatrix::zeros(self.field, a + b, a + b);
                for i in 0..a {
                    for j in 0..a {
                        m.set(i, j, x.get(i, j).clone());
                    }
                }
                for i in 0..b {
                    for j in 0..b {
                        m.set(a + i, a + j, y.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        let mut labels = self.basis_labels.clone();
        labels.extend(other.basis_labels.iter().cloned());
        CellModule::new(label, self.side, labels, self.field, action)
    }

    /// Checks that `x -> x·f` intertwines the actions of `self` and `target`.
    /// Returns the first algebra basis element where it fails.
    pub fn hom_witness(&self, target: &CellModule, f: &ExactMatrix) -> Option<usize> {
        (0..self.action.len()).find(|&p| {
            self.action[p].mul(f).expect("shapes") != f.mul(&target.action[p]).expect("shapes")
        })
    }
}

fn describe_vector(v: &[Scalar], labels: &[String]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(labels)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, l)| if c.is_one() { l.clone() } else { format!("{c}*{l}") })
        .collect();
    terms.join("+")
}

/// The standard module of cell `label` on the given side. The representation
/// property is verified.
pub fn standard_module(alg: &Algebra, label: &str, side: Side) -> Result<CellModule> {
    let ci = alg.datum().cell_index(label)?;
    standard_module_at(alg, ci, side)
}

pub fn standard_module_at(alg: &Algebra, ci: usize, side: Side) -> Result<CellModule> {
    let f = alg.field();
    let cell = alg.datum().cell(ci);
    let basis_labels = match side {
        Side::Right => cell.cols.clone(),
        Side::Left => cell.rows.clone(),
    };
    let d = basis_labels.len();
    let mut action = Vec::with_capacity(alg.dim());
    for a in 0..alg.dim() {
        let x = [(a, f.one())];
        let rows = match side {
            Side::Right => alg.right_cell_action(ci, &x)?,
            Side::Left => alg.left_cell_action(ci, &x)?,
        };
        action.push(ExactMatrix::from_rows(f, d, rows)?);
    }
    let m = CellModule::new(cell.label.clone(), side, basis_labels, f, action)?;
    if let Some((i, j)) = m.representation_witness(alg) {
        return Err(Error::InvalidAlgebra(format!(
            "{side} standard module {} is not a representation at ({}, {})",
            cell.label,
            alg.name(i),
            alg.name(j)
        )));
    }
    Ok(m)
}

/// The pairing between the left and right standard modules of cell `ci`:
/// entry `(s, t)` is `β` with `c_{ut}·c_{sv} ≡ β c_{uv}` modulo the cells
/// above, for `s, u` row indices and `t, v` column indices. Computed with
/// `u, v` the first indices and checked for all other choices.
pub fn pairing(alg: &Algebra, ci: usize) -> Result<ExactMatrix> {
    let f = alg.field();
    let datum = alg.datum();
    let cell = datum.cell(ci);
    let (ni, nj) = (cell.rows.len(), cell.cols.len());
    let mut b = ExactMatrix::zeros(f, ni, nj);
    for u in 0..ni {
        for v in 0..nj {
            for s in 0..ni {
                for t in 0..nj {
                    let x = [(cell.position(u, t), f.one())];
                    let y = [(cell.position(s, v), f.one())];
                    let p = alg.mul_sparse(&x, &y);
                    let val = read_multiple(alg, ci, u, v, &p).ok_or_else(|| {
                        Error::InvalidAlgebra(format!(
                            "{} * {} is not a multiple of {} modulo higher cells",
                            alg.name(cell.position(u, t)),
                            alg.name(cell.position(s, v)),
                            alg.name(cell.position(u, v))
                        ))
                    })?;
                    if u == 0 && v == 0 {
                        b.set(s, t, val);
                    } else if &val != b.get(s, t) {
                        return Err(Error::InvalidAlgebra(format!(
                            "form on cell {} depends on the auxiliary pair ({}, {})",
                            cell.label, cell.rows[u], cell.cols[v]
                        )));
                    }
                }
            }
        }
    }
    Ok(b)
}

/// Coefficient of `c_{uv}` when `p ≡ β c_{uv}` modulo the cells above `ci`.
fn read_multiple(alg: &Algebra, ci: usize, u: usize, v: usize, p: &[Scalar]) -> Option<Scalar> {
    let datum: &CellDatum = alg.datum();
    let mut val = alg.field().zero();
    for (k, x) in p.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let (ck, r, c) = datum.locate(k);
        if ck == ci && r == u && c == v {
            val = x.clone();
        } else if !datum.above(ck, ci) {
            return None;
        }
    }
    Some(val)
}

/// Gram matrix `⟨c_s, c_t⟩` of a cellular cell, where
/// `⟨c_s, c_t⟩ c_{uv} ≡ c_{us} c_{tv}`.
pub fn gram(alg: &Algebra, label: &str) -> Result<ExactMatrix> {
    let ci = alg.datum().cell_index(label)?;
    Ok(pairing(alg, ci)?.transpose())
}

/// Radical of the standard module of cell `ci` on the given side, as a
/// subspace of its coordinate space.
pub fn radical_of_standard(alg: &Algebra, ci: usize, side: Side) -> Result<Span> {
    let b = pairing(alg, ci)?;
    let (m, n) = match side {
        Side::Right => (b, alg.datum().cell(ci).cols.len()),
        Side::Left => (b.transpose(), alg.datum().cell(ci).rows.len()),
    };
    Ok(Span::from_vectors(alg.field(), n, m.nullspace()))
}

/// The simple head of a standard module; zero-dimensional when the form
/// vanishes.
pub fn simple_module(alg: &Algebra, label: &str, side: Side) -> Result<CellModule> {
    let ci = alg.datum().cell_index(label)?;
    simple_module_at(alg, ci, side)
}

pub fn simple_module_at(alg: &Algebra, ci: usize, side: Side) -> Result<CellModule> {
    let w = standard_module_at(alg, ci, side)?;
    let rad = radical_of_standard(alg, ci, side)?;
    w.quotient(&rad, w.label.clone())
}

/// `dim L^λ`, the rank of the form.
pub fn simple_dimension(alg: &Algebra, label: &str) -> Result<usize> {
    let ci = alg.datum().cell_index(label)?;
    Ok(pairing(alg, ci)?.rank())
}

/// Cells whose form is nonzero, in basis order.
pub fn lambda_plus_zero(alg: &Algebra) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (ci, cell) in alg.datum().cells().iter().enumerate() {
        if !pairing(alg, ci)?.is_zero() {
            out.push(cell.label.clone());
        }
    }
    Ok(out)
}

/// Result of [`embed_standard`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedReport {
    pub label: String,
    pub fixed_row: String,
    pub failures: Vec<String>,
}

impl EmbedReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `c_t -> c_{st} + A^{∨λ}` (with `s` the first row index) is an
/// injective map of right modules.
pub fn embed_standard(alg: &Algebra, label: &str) -> Result<EmbedReport> {
    let ci = alg.datum().cell_index(label)?;
    let w = standard_module_at(alg, ci, Side::Right)?;
    let cell = alg.datum().cell(ci);
    let above = alg.datum().positions_above(ci);
    let f = alg.field();
    let mut failures = Vec::new();
    // images are distinct basis elements outside the ideal, hence independent
    let images: Vec<usize> = (0..cell.cols.len()).map(|t| cell.position(0, t)).collect();
    if images.iter().any(|p| above.contains(p)) {
        failures.push("image meets the ideal above".to_string());
    }
    for (t, &img) in images.iter().enumerate() {
        for a in 0..alg.dim() {
            let mut p = alg.mul_sparse(&[(img, f.one())], &[(a, f.one())]);
            let module_side = w.act(&unit_vec(f, w.dim(), t), a);
            for (v, c) in module_side.iter().enumerate() {
                let q = images[v];
                p[q] = &p[q] - c;
            }
            if !Algebra::supported_on(&p, &above) {
                failures.push(format!("c_{} * {}", cell.cols[t], alg.name(a)));
            }
        }
    }
    Ok(EmbedReport {
        label: label.to_string(),
        fixed_row: cell.rows[0].clone(),
        failures,
    })
}

/// Quotient by the span of the cells in `set`, which must be upward closed.
/// The empty set gives a copy.
pub fn quotient_cellular(alg: &Algebra, set: &[String]) -> Result<Algebra> {
    quotient_with_map(alg, set).map(|(q, _)| q)
}

/// As [`quotient_cellular`], also returning for each position of `alg` its
/// image position in the quotient (`None` when it is killed).
pub fn quotient_with_map(alg: &Algebra, set: &[String]) -> Result<(Algebra, Vec<Option<usize>>)> {
    let datum = alg.datum();
    let poset = datum.poset();
    let mut idx = Vec::with_capacity(set.len());
    for l in set {
        idx.push(poset.require(l)?);
    }
    if let Some((a, b)) = poset.saturation_witness(&idx) {
        return Err(Error::NotSaturated {
            above: poset.label(a).to_string(),
            below: poset.label(b).to_string(),
        });
    }
    let keep: Vec<usize> = (0..poset.len()).filter(|i| !idx.contains(i)).collect();
    if keep.is_empty() {
        return Err(Error::InvalidParameters("quotient by every cell is the zero algebra".into()));
    }
    let sub = poset.restrict(&keep);
    let cells = keep
        .iter()
        .map(|&ci| {
            let c = datum.cell(ci);
            (c.label.clone(), c.rows.clone(), c.cols.clone())
        })
        .collect();
    let new_datum = CellDatum::new(sub, cells)?;
    let mut map = vec![None; alg.dim()];
    for (ci, c) in datum.cells().iter().enumerate() {
        if !keep.contains(&ci) {
            continue;
        }
        let nci = new_datum.cell_index(&c.label)?;
        let nc = new_datum.cell(nci);
        for r in 0..c.rows.len() {
            for col in 0..c.cols.len() {
                map[c.position(r, col)] = Some(nc.position(r, col));
            }
        }
    }
    let project = |terms: &[(usize, Scalar)]| -> Vec<(usize, Scalar)> {
        terms
            .iter()
            .filter_map(|(p, c)| map[*p].map(|q| (q, c.clone())))
            .collect()
    };
    let mut table = Table::new();
    for ((i, j), terms) in alg.table() {
        if let (Some(a), Some(b)) = (map[*i], map[*j]) {
            table.insert((a, b), project(terms));
        }
    }
    let unit = AlgebraElement::from_terms(project(alg.unit().terms()));
    let mut names = vec![String::new(); new_datum.dim()];
    for (p, q) in map.iter().enumerate() {
        if let Some(q) = q {
            names[*q] = alg.name(p).to_string();
        }
    }
    let q = Algebra::new(alg.field(), new_datum, table, unit, alg.is_involutive(), Some(names))?;
    Ok((q, map))
}

/// The zero vector of a module, for convenience.
pub fn zero_of(m: &CellModule) -> Vec<Scalar> {
    zero_vec(m.field(), m.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_paper_quiver_example, lam, matrix_algebra};

    fn path() -> Algebra {
        build_paper_quiver_example(Field::Rational).unwrap().0
    }

    #[test]
    fn standard_module_dimensions() {
        let a = path();
        assert_eq!(standard_module(&a, &lam(0), Side::Right).unwrap().dim(), 1);
        let w = standard_module(&a, &lam(2), Side::Right).unwrap();
        assert_eq!(w.basis_labels, ["2", "3"]);
        let one = w.element_action(a.unit().terms());
        assert_eq!(one, ExactMatrix::identity(Field::Rational, 2));
    }

    #[test]
    fn gram_examples() {
        let a = path();
        assert_eq!(gram(&a, &lam(5)).unwrap(), ExactMatrix::from_i64(Field::Rational, &[&[1]]));
        assert!(gram(&a, &lam(0)).unwrap().is_zero());
        let m = matrix_algebra(4, Field::Rational).unwrap();
        assert_eq!(gram(&m, "4").unwrap(), ExactMatrix::identity(Field::Rational, 4));
        assert_eq!(simple_dimension(&m, "4").unwrap(), 4);
    }

    #[test]
    fn lambda_plus_zero_of_examples() {
        let a = path();
        assert_eq!(lambda_plus_zero(&a).unwrap(), (1..=5).map(lam).collect::<Vec<_>>());
        for i in 1..=5 {
            assert_eq!(simple_dimension(&a, &lam(i)).unwrap(), 1);
        }
        let m = matrix_algebra(3, Field::Rational).unwrap();
        assert_eq!(lambda_plus_zero(&m).unwrap(), ["3"]);
    }

    #[test]
    fn embeddings() {
        let a = path();
        for i in 0..=5 {
            assert!(embed_standard(&a, &lam(i)).unwrap().is_ok());
        }
        let m = matrix_algebra(3, Field::Rational).unwrap();
        assert!(embed_standard(&m, "3").unwrap().is_ok());
        let one = matrix_algebra(1, Field::Rational).unwrap();
        assert!(embed_standard(&one, "1").unwrap().is_ok());
    }

    #[test]
    fn quotients() {
        let a = path();
        let q = quotient_cellular(&a, &[lam(0)]).unwrap();
        assert_eq!(q.dim(), 17);
        assert!(q.verify_cellular().is_ok());
        for i in 1..=5 {
            assert_eq!(gram(&q, &lam(i)).unwrap(), gram(&a, &lam(i)).unwrap());
        }
        match quotient_cellular(&a, &[lam(1)]) {
            Err(Error::NotSaturated { above, below }) => {
                assert_eq!((above.as_str(), below.as_str()), ("λ0", "λ1"))
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(quotient_cellular(&a, &[]).unwrap(), a);
    }

    #[test]
    fn form_invariants() {
        let a = path();
        for (ci, cell) in a.datum().cells().iter().enumerate() {
            let g = gram(&a, &cell.label).unwrap();
            assert_eq!(g, g.transpose());
            let right = standard_module_at(&a, ci, Side::Right).unwrap();
            let left = standard_module_at(&a, ci, Side::Left).unwrap();
            assert_eq!(left.dim(), right.dim());
            let rr = radical_of_standard(&a, ci, Side::Right).unwrap();
            let rl = radical_of_standard(&a, ci, Side::Left).unwrap();
            assert_eq!(rr.dim(), rl.dim());
            assert!(right.is_invariant(&rr));
            assert!(left.is_invariant(&rl));
            let l = simple_module_at(&a, ci, Side::Right).unwrap();
            assert_eq!(l.dim(), g.rank());
            assert!(l.representation_witness(&a).is_none());
        }
    }
}
