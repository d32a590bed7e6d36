//! Finite posets, cell data and algebras given by structure constants.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, zero_vec, Field, Scalar};

/// A finite strict partial order on string labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // gt[i][j] means labels[i] > labels[j]
    gt: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds the order generated by `pairs`, where `(a, b)` means `a > b`.
    /// The relation is transitively closed; a cycle is reported with a witness.
    pub fn new(labels: Vec<String>, pairs: &[(String, String)]) -> Result<Poset> {
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Poset(format!("duplicate element {l:?}")));
            }
        }
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let ia = *index.get(a).ok_or_else(|| Error::UnknownLabel(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| Error::UnknownLabel(b.clone()))?;
            idx_pairs.push((ia, ib));
        }
        Self::build(labels, index, &idx_pairs)
    }

    /// Same as [`Poset::new`] with pairs given by index.
    pub fn from_indices(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Poset(format!("duplicate element {l:?}")));
            }
        }
        if let Some(&(a, b)) = pairs.iter().find(|(a, b)| *a >= labels.len() || *b >= labels.len()) {
            return Err(Error::Poset(format!("pair ({a}, {b}) out of range")));
        }
        Self::build(labels, index, pairs)
    }

    /// A chain `labels[0] > labels[1] > ...`.
    pub fn chain(labels: Vec<String>) -> Poset {
        let pairs: Vec<(usize, usize)> = (1..labels.len()).map(|i| (i - 1, i)).collect();
        Self::from_indices(labels, &pairs).expect("a chain is a poset")
    }

    fn build(labels: Vec<String>, index: HashMap<String, usize>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        let mut gt = vec![vec![false; n]; n];
        for &(a, b) in pairs {
            if a == b {
                return Err(Error::Poset(format!("{} > {} is reflexive", labels[a], labels[a])));
            }
            gt[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if gt[i][k] {
                    for j in 0..n {
                        if gt[k][j] {
                            gt[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            if gt[i][i] {
                let j = (0..n).find(|&j| j != i && gt[i][j] && gt[j][i]).unwrap_or(i);
                return Err(Error::Poset(format!(
                    "not antisymmetric: {} > {} and {} > {}",
                    labels[i], labels[j], labels[j], labels[i]
                )));
            }
        }
        Ok(Poset { labels, index, gt })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// `labels[i] > labels[j]`
    pub fn gt(&self, i: usize, j: usize) -> bool {
        self.gt[i][j]
    }

    pub fn ge(&self, i: usize, j: usize) -> bool {
        i == j || self.gt[i][j]
    }

    /// Label-based comparison; unknown labels compare as unrelated.
    pub fn gt_label(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.gt(i, j),
            _ => false,
        }
    }

    pub fn ge_label(&self, a: &str, b: &str) -> bool {
        a == b || self.gt_label(a, b)
    }

    /// Covering pairs `(i, j)` with `i > j` and nothing strictly between,
    /// sorted by index.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.gt[i][j] && !(0..n).any(|k| self.gt[i][k] && self.gt[k][j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// A linear extension listing larger elements first; among the currently
    /// maximal elements the one with the smallest index goes next.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut done = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&j| !done[j] && !(0..n).any(|i| !done[i] && self.gt[i][j]))
                .expect("a finite poset has a maximal element");
            done[next] = true;
            out.push(next);
        }
        out
    }

    /// The induced order on `elements`, relabelled in the given order.
    pub fn restrict(&self, elements: &[usize]) -> Poset {
        let labels: Vec<String> = elements.iter().map(|&i| self.labels[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &i) in elements.iter().enumerate() {
            for (b, &j) in elements.iter().enumerate() {
                if self.gt[i][j] {
                    pairs.push((a, b));
                }
            }
        }
        Self::from_indices(labels, &pairs).expect("restriction of a poset")
    }

    /// `None` when `subset` is upward closed, otherwise a pair
    /// `(above, below)` with `below` in the subset and `above` outside it.
    pub fn saturation_witness(&self, subset: &[usize]) -> Option<(usize, usize)> {
        let mut member = vec![false; self.len()];
        for &i in subset {
            member[i] = true;
        }
        for &j in subset {
            for i in 0..self.len() {
                if self.gt[i][j] && !member[i] {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// One cell: a block of basis elements `c_{st}` with `s` in `rows` and `t` in
/// `cols`. For a cellular algebra `rows == cols == T(λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    offset: usize,
}

impl Cell {
    pub fn size(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Basis position of `c_{rows[r], cols[c]}`.
    pub fn position(&self, r: usize, c: usize) -> usize {
        self.offset + r * self.cols.len() + c
    }

    pub fn positions(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.size()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_index(&self, s: &str) -> Option<usize> {
        self.rows.iter().position(|x| x == s)
    }

    pub fn col_index(&self, t: &str) -> Option<usize> {
        self.cols.iter().position(|x| x == t)
    }
}

/// A poset of cell labels together with the cells. Cells are stored in the
/// linearized order (larger first, input order as tie-break) and basis
/// positions run through the cells in that order, row-major inside a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDatum {
    poset: Poset,
    cells: Vec<Cell>,
    locate: Vec<(usize, usize, usize)>,
}

/// Input description of one cell: label, row indices, column indices.
pub type CellSpec = (String, Vec<String>, Vec<String>);

impl CellDatum {
    /// `cells` are matched to poset elements by label and must cover each
    /// element exactly once.
    pub fn new(poset: Poset, cells: Vec<CellSpec>) -> Result<CellDatum> {
        if cells.len() != poset.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} cells for {} poset elements",
                cells.len(),
                poset.len()
            )));
        }
        let mut by_label: HashMap<String, CellSpec> = HashMap::new();
        for c in cells {
            if poset.index_of(&c.0).is_none() {
                return Err(Error::UnknownLabel(c.0));
            }
            if c.1.is_empty() || c.2.is_empty() {
                return Err(Error::InvalidAlgebra(format!("cell {} has an empty index set", c.0)));
            }
            for list in [&c.1, &c.2] {
                let mut seen = std::collections::HashSet::new();
                if let Some(d) = list.iter().find(|x| !seen.insert(x.as_str())) {
                    return Err(Error::InvalidAlgebra(format!(
                        "cell {} repeats index {d}",
                        c.0
                    )));
                }
            }
            let label = c.0.clone();
            if by_label.insert(label.clone(), c).is_some() {
                return Err(Error::InvalidAlgebra(format!("cell {label} given twice")));
            }
        }
        let order = poset.linear_extension();
        let poset = poset.restrict(&order);
        let mut offset = 0;
        let mut out = Vec::with_capacity(order.len());
        let mut locate = Vec::new();
        for (ci, l) in poset.labels().iter().enumerate() {
            let (label, rows, cols) = by_label.remove(l).expect("every label has a cell");
            for r in 0..rows.len() {
                for c in 0..cols.len() {
                    locate.push((ci, r, c));
                }
            }
            let cell = Cell { label, rows, cols, offset };
            offset += cell.size();
            out.push(cell);
        }
        Ok(CellDatum { poset, cells: out, locate })
    }

    /// A cellular datum: every cell is `T(λ) × T(λ)`.
    pub fn cellular(poset: Poset, t_sets: Vec<(String, Vec<String>)>) -> Result<CellDatum> {
        Self::new(
            poset,
            t_sets.into_iter().map(|(l, t)| (l, t.clone(), t)).collect(),
        )
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn dim(&self) -> usize {
        self.locate.len()
    }

    pub fn cell_index(&self, label: &str) -> Result<usize> {
        self.poset.require(label)
    }

    /// `(cell, row, col)` of a basis position.
    pub fn locate(&self, pos: usize) -> (usize, usize, usize) {
        self.locate[pos]
    }

    /// Cell `i` lies strictly above cell `j`.
    pub fn above(&self, i: usize, j: usize) -> bool {
        self.poset.gt(i, j)
    }

    pub fn is_cellular_shape(&self) -> bool {
        self.cells.iter().all(Cell::is_square)
    }

    /// Positions spanning the cells strictly above cell `ci`.
    pub fn positions_above(&self, ci: usize) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&k| self.above(k, ci))
            .flat_map(|k| self.cells[k].positions())
            .collect()
    }

    /// Position of the transposed element `c_{ts}` when the cell is square.
    pub fn transpose_position(&self, pos: usize) -> Option<usize> {
        let (ci, r, c) = self.locate(pos);
        let cell = &self.cells[ci];
        cell.is_square().then(|| cell.position(c, r))
    }

    /// Human-readable default name `c[λ](s,t)`.
    pub fn default_name(&self, pos: usize) -> String {
        let (ci, r, c) = self.locate(pos);
        let cell = &self.cells[ci];
        format!("c[{}]({},{})", cell.label, cell.rows[r], cell.cols[c])
    }
}

/// A sparse element of an algebra: sorted `(position, coefficient)` pairs
/// with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AlgebraElement {
    terms: Vec<(usize, Scalar)>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: Vec::new() }
    }

    pub fn basis(pos: usize, field: Field) -> Self {
        AlgebraElement {
            terms: vec![(pos, field.one())],
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Scalar)>>(terms: I) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (p, c) in terms {
            match map.get_mut(&p) {
                Some(x) => *x = &*x + &c,
                None => {
                    map.insert(p, c);
                }
            }
        }
        AlgebraElement {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        AlgebraElement {
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, field: Field, dim: usize) -> Vec<Scalar> {
        let mut v = zero_vec(field, dim);
        for (p, c) in &self.terms {
            v[*p] = c.clone();
        }
        v
    }

    pub fn terms(&self) -> &[(usize, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, pos: usize) -> Option<&Scalar> {
        self.terms
            .binary_search_by_key(&pos, |(p, _)| *p)
            .ok()
            .map(|i| &self.terms[i].1)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .cloned()
                .chain(other.terms.iter().map(|(p, c)| (*p, -c))),
        )
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, x)| (*p, c * x)))
    }

    /// Largest position in the support.
    pub fn max_position(&self) -> Option<usize> {
        self.terms.last().map(|(p, _)| *p)
    }
}

/// Which kind of identity a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Unit,
    Associativity,
    AntiAutomorphism,
    RightCellRelation,
    LeftCellRelation,
    Ideal,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Unit => "unit",
            Axiom::Associativity => "associativity",
            Axiom::AntiAutomorphism => "anti-automorphism",
            Axiom::RightCellRelation => "right-cell-relation",
            Axiom::LeftCellRelation => "left-cell-relation",
            Axiom::Ideal => "ideal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.witness)
    }
}

/// Outcome of [`Algebra::verify_cellular`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellularReport {
    pub violations: Vec<Violation>,
}

impl CellularReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

/// Sparse structure constants: `(i, j) -> c_i c_j` as `(position, coeff)`.
pub type Table = BTreeMap<(usize, usize), Vec<(usize, Scalar)>>;

/// A finite-dimensional algebra with a basis organised by a [`CellDatum`].
///
/// When `involutive` is set the datum is cellular and `c_{st} -> c_{ts}` is
/// claimed to be an anti-automorphism; otherwise the basis is only a
/// standard basis (left and right relations, no involution).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    datum: CellDatum,
    table: Table,
    unit: AlgebraElement,
    involutive: bool,
    names: Vec<String>,
}

impl Algebra {
    /// Structural validation only: indices in range, one field, square cells
    /// when involutive. Use [`Algebra::verify_cellular`] for the axioms.
    pub fn new(
        field: Field,
        datum: CellDatum,
        table: Table,
        unit: AlgebraElement,
        involutive: bool,
        names: Option<Vec<String>>,
    ) -> Result<Algebra> {
        let dim = datum.dim();
        if involutive && !datum.is_cellular_shape() {
            return Err(Error::InvalidAlgebra(
                "an involution needs rows == cols in every cell".into(),
            ));
        }
        let check_terms = |terms: &[(usize, Scalar)], what: &str| -> Result<()> {
            for (p, c) in terms {
                if *p >= dim {
                    return Err(Error::InvalidAlgebra(format!("{what}: position {p} out of range")));
                }
                if c.field() != field {
                    return Err(Error::FieldMismatch {
                        expected: field,
                        found: c.field(),
                    });
                }
            }
            Ok(())
        };
        let mut clean = Table::new();
        for ((i, j), terms) in table {
            if i >= dim || j >= dim {
                return Err(Error::InvalidAlgebra(format!("product ({i}, {j}) out of range")));
            }
            check_terms(&terms, "product")?;
            let e = AlgebraElement::from_terms(terms);
            if !e.is_zero() {
                clean.insert((i, j), e.terms);
            }
        }
        check_terms(unit.terms(), "unit")?;
        let names = match names {
            Some(n) if n.len() == dim => n,
            Some(n) => {
                return Err(Error::InvalidAlgebra(format!(
                    "{} names for dimension {dim}",
                    n.len()
                )))
            }
            None => (0..dim).map(|p| datum.default_name(p)).collect(),
        };
        Ok(Algebra {
            field,
            datum,
            table: clean,
            unit,
            involutive,
            names,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.datum.dim()
    }

    pub fn datum(&self) -> &CellDatum {
        &self.datum
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn unit(&self) -> &AlgebraElement {
        &self.unit
    }

    pub fn is_involutive(&self) -> bool {
        self.involutive
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, pos: usize) -> &str {
        &self.names[pos]
    }

    pub fn position_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same algebra over another field. Structure constants must be integers
    /// or otherwise representable there.
    pub fn change_field(&self, field: Field) -> Result<Algebra> {
        let conv = |c: &Scalar| -> Result<Scalar> {
            match c {
                Scalar::Q(q) => field.from_rational(q),
                Scalar::Fp { .. } if c.field() == field => Ok(c.clone()),
                Scalar::Fp { .. } => Err(Error::FieldMismatch {
                    expected: field,
                    found: c.field(),
                }),
            }
        };
        let mut table = Table::new();
        for (k, terms) in &self.table {
            let t: Result<Vec<_>> = terms.iter().map(|(p, c)| Ok((*p, conv(c)?))).collect();
            table.insert(*k, t?);
        }
        let unit: Result<Vec<_>> = self.unit.terms().iter().map(|(p, c)| Ok((*p, conv(c)?))).collect();
        Algebra::new(
            field,
            self.datum.clone(),
            table,
            AlgebraElement::from_terms(unit?),
            self.involutive,
            Some(self.names.clone()),
        )
    }

    /// Copy with the product `c_i c_j` replaced. Used to build mutants.
    pub fn with_product(&self, i: usize, j: usize, terms: Vec<(usize, Scalar)>) -> Algebra {
        let mut a = self.clone();
        let e = AlgebraElement::from_terms(terms);
        if e.is_zero() {
            a.table.remove(&(i, j));
        } else {
            a.table.insert((i, j), e.terms);
        }
        a
    }

    /// `c_i c_j`
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.table.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    fn check_element(&self, a: &AlgebraElement) -> Result<()> {
        if let Some(p) = a.max_position() {
            if p >= self.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "element has position {p} but the algebra has dimension {}",
                    self.dim()
                )));
            }
        }
        if let Some((_, c)) = a.terms().iter().find(|(_, c)| c.field() != self.field) {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: c.field(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(AlgebraElement::from_dense(&self.mul_sparse(a.terms(), b.terms())))
    }

    /// Dense product of two sparse elements.
    pub fn mul_sparse(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Vec<Scalar> {
        let mut out = zero_vec(self.field, self.dim());
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                for (k, c) in self.mul_basis(*i, *j) {
                    out[*k] = &out[*k] + &(&xy * c);
                }
            }
        }
        out
    }

    pub fn mul_dense(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let sa = AlgebraElement::from_dense(a);
        let sb = AlgebraElement::from_dense(b);
        self.mul_sparse(sa.terms(), sb.terms())
    }

    /// Applies `c_{st} -> c_{ts}` linearly.
    pub fn involution(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if !self.involutive {
            return Err(Error::InvalidAlgebra("algebra has no involution".into()));
        }
        self.check_element(a)?;
        Ok(AlgebraElement::from_terms(a.terms().iter().map(|(p, c)| {
            (self.datum.transpose_position(*p).expect("square cell"), c.clone())
        })))
    }

    /// Basis positions spanning the ideal of cells strictly above `label`.
    pub fn ideal_above(&self, label: &str) -> Result<Vec<usize>> {
        let ci = self.datum.cell_index(label)?;
        Ok(self.datum.positions_above(ci))
    }

    /// Matrix of `x -> x·c_j` on row vectors (row `i` holds `c_i c_j`).
    pub fn right_mult_matrix(&self, j: usize) -> crate::linalg::ExactMatrix {
        let n = self.dim();
        let mut m = crate::linalg::ExactMatrix::zeros(self.field, n, n);
        for i in 0..n {
            for (k, c) in self.mul_basis(i, j) {
                m.set(i, *k, c.clone());
            }
        }
        m
    }

    /// Matrix of `x -> c_i·x` on row vectors (row `j` holds `c_i c_j`).
    pub fn left_mult_matrix(&self, i: usize) -> crate::linalg::ExactMatrix {
        let n = self.dim();
        let mut m = crate::linalg::ExactMatrix::zeros(self.field, n, n);
        for j in 0..n {
            for (k, c) in self.mul_basis(i, j) {
                m.set(j, *k, c.clone());
            }
        }
        m
    }

    /// Reads `p` as `Σ_v r_v c_{s v}` modulo cells above `ci`, where `s` is
    /// row `r` of cell `ci`. `Err` names the offending position.
    fn read_row(&self, ci: usize, r: usize, p: &[Scalar]) -> std::result::Result<Vec<Scalar>, usize> {
        let cell = self.datum.cell(ci);
        let mut out = zero_vec(self.field, cell.cols.len());
        for (k, x) in p.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (ck, rk, vk) = self.datum.locate(k);
            if ck == ci && rk == r {
                out[vk] = x.clone();
            } else if !self.datum.above(ck, ci) {
                return Err(k);
            }
        }
        Ok(out)
    }

    /// Reads `p` as `Σ_u r_u c_{u t}` modulo cells above `ci`, where `t` is
    /// column `c` of cell `ci`.
    fn read_col(&self, ci: usize, c: usize, p: &[Scalar]) -> std::result::Result<Vec<Scalar>, usize> {
        let cell = self.datum.cell(ci);
        let mut out = zero_vec(self.field, cell.rows.len());
        for (k, x) in p.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (ck, uk, ck_col) = self.datum.locate(k);
            if ck == ci && ck_col == c {
                out[uk] = x.clone();
            } else if !self.datum.above(ck, ci) {
                return Err(k);
            }
        }
        Ok(out)
    }

    /// Right cell action of `a` on cell `ci`: row `t` holds the coefficients
    /// `r_v` in `c_{st}·a ≡ Σ_v r_v c_{sv}`. Computed with the first row `s`
    /// and checked against every other row.
    pub fn right_cell_action(&self, ci: usize, a: &[(usize, Scalar)]) -> Result<Vec<Vec<Scalar>>> {
        self.right_cell_action_witness(ci, a).map_err(Error::InvalidAlgebra)
    }

    fn right_cell_action_witness(
        &self,
        ci: usize,
        a: &[(usize, Scalar)],
    ) -> std::result::Result<Vec<Vec<Scalar>>, String> {
        let cell = self.datum.cell(ci);
        let mut first = Vec::with_capacity(cell.cols.len());
        for r in 0..cell.rows.len() {
            for t in 0..cell.cols.len() {
                let x = [(cell.position(r, t), self.field.one())];
                let p = self.mul_sparse(&x, a);
                let coeffs = self.read_row(ci, r, &p).map_err(|k| {
                    format!(
                        "{} * {} has term {} outside row {} of cell {} and not above it",
                        self.names[cell.position(r, t)],
                        self.describe(a),
                        self.names[k],
                        cell.rows[r],
                        cell.label
                    )
                })?;
                if r == 0 {
                    first.push(coeffs);
                } else if coeffs != first[t] {
                    return Err(format!(
                        "coefficients of {} * {} differ from those of {} * {}",
                        self.names[cell.position(r, t)],
                        self.describe(a),
                        self.names[cell.position(0, t)],
                        self.describe(a)
                    ));
                }
            }
        }
        Ok(first)
    }

    /// Left cell action of `a` on cell `ci`: row `s` holds `r_u` in
    /// `a·c_{st} ≡ Σ_u r_u c_{ut}`, computed with the first column `t` and
    /// checked against the others.
    pub fn left_cell_action(&self, ci: usize, a: &[(usize, Scalar)]) -> Result<Vec<Vec<Scalar>>> {
        self.left_cell_action_witness(ci, a).map_err(Error::InvalidAlgebra)
    }

    fn left_cell_action_witness(
        &self,
        ci: usize,
        a: &[(usize, Scalar)],
    ) -> std::result::Result<Vec<Vec<Scalar>>, String> {
        let cell = self.datum.cell(ci);
        let mut first = Vec::with_capacity(cell.rows.len());
        for c in 0..cell.cols.len() {
            for s in 0..cell.rows.len() {
                let x = [(cell.position(s, c), self.field.one())];
                let p = self.mul_sparse(a, &x);
                let coeffs = self.read_col(ci, c, &p).map_err(|k| {
                    format!(
                        "{} * {} has term {} outside column {} of cell {} and not above it",
                        self.describe(a),
                        self.names[cell.position(s, c)],
                        self.names[k],
                        cell.cols[c],
                        cell.label
                    )
                })?;
                if c == 0 {
                    first.push(coeffs);
                } else if coeffs != first[s] {
                    return Err(format!(
                        "coefficients of {} * {} differ from those of {} * {}",
                        self.describe(a),
                        self.names[cell.position(s, c)],
                        self.describe(a),
                        self.names[cell.position(s, 0)]
                    ));
                }
            }
        }
        Ok(first)
    }

    /// Coefficients `r_v` of `c_{st}·a ≡ Σ_v r_v c_{sv}` modulo the cells
    /// above `label`, verified to be the same for every `s`.
    pub fn cell_coefficients(&self, label: &str, t: &str, a: &AlgebraElement) -> Result<Vec<(String, Scalar)>> {
        self.check_element(a)?;
        let ci = self.datum.cell_index(label)?;
        let cell = self.datum.cell(ci);
        let ti = cell
            .col_index(t)
            .ok_or_else(|| Error::UnknownLabel(format!("{t} in T({label})")))?;
        let m = self.right_cell_action(ci, a.terms())?;
        Ok(cell.cols.iter().cloned().zip(m[ti].iter().cloned()).collect())
    }

    /// Text form of a sparse element, e.g. `2*e1 + a12`.
    pub fn describe(&self, a: &[(usize, Scalar)]) -> String {
        if a.is_empty() {
            return "0".into();
        }
        a.iter()
            .map(|(p, c)| {
                if c.is_one() {
                    self.names[*p].clone()
                } else {
                    format!("{}*{}", c, self.names[*p])
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Whether the stored unit is a two-sided identity.
    pub fn unit_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            let x = [(i, self.field.one())];
            let want: Vec<Scalar> = crate::linalg::unit_vec(self.field, self.dim(), i);
            if self.mul_sparse(self.unit.terms(), &x) != want {
                out.push(Violation {
                    axiom: Axiom::Unit,
                    witness: format!("1 * {} != {}", self.names[i], self.names[i]),
                });
            }
            if self.mul_sparse(&x, self.unit.terms()) != want {
                out.push(Violation {
                    axiom: Axiom::Unit,
                    witness: format!("{} * 1 != {}", self.names[i], self.names[i]),
                });
            }
        }
        out
    }

    /// Exhaustive check of the unit, associativity, the involution (when
    /// present), both cell relations and the ideals above each cell.
    pub fn verify_cellular(&self) -> CellularReport {
        let n = self.dim();
        let f = self.field;
        let mut violations = self.unit_violations();

        // associativity: one task per left factor
        let assoc: Vec<Violation> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut found = Vec::new();
                for j in 0..n {
                    let ij = self.mul_basis(i, j);
                    for k in 0..n {
                        let jk = self.mul_basis(j, k);
                        let mut lhs = zero_vec(f, n);
                        for (m, c) in ij {
                            for (q, d) in self.mul_basis(*m, k) {
                                lhs[*q] = &lhs[*q] + &(c * d);
                            }
                        }
                        let mut rhs = zero_vec(f, n);
                        for (m, c) in jk {
                            for (q, d) in self.mul_basis(i, *m) {
                                rhs[*q] = &rhs[*q] + &(c * d);
                            }
                        }
                        if lhs != rhs {
                            found.push(Violation {
                                axiom: Axiom::Associativity,
                                witness: format!(
                                    "({} * {}) * {} != {} * ({} * {})",
                                    self.names[i], self.names[j], self.names[k],
                                    self.names[i], self.names[j], self.names[k]
                                ),
                            });
                        }
                    }
                }
                found
            })
            .collect();
        violations.extend(assoc);

        if self.involutive {
            let star = |p: usize| self.datum.transpose_position(p).expect("square cell");
            for i in 0..n {
                for j in 0..n {
                    let lhs: Vec<(usize, Scalar)> = self
                        .mul_basis(i, j)
                        .iter()
                        .map(|(p, c)| (star(*p), c.clone()))
                        .collect();
                    let lhs = AlgebraElement::from_terms(lhs);
                    let rhs = AlgebraElement::from_terms(self.mul_basis(star(j), star(i)).to_vec());
                    if lhs != rhs {
                        violations.push(Violation {
                            axiom: Axiom::AntiAutomorphism,
                            witness: format!(
                                "({} * {})* != {}* * {}*",
                                self.names[i], self.names[j], self.names[j], self.names[i]
                            ),
                        });
                    }
                }
            }
        }

        for ci in 0..self.datum.cells().len() {
            for a in 0..n {
                let x = [(a, f.one())];
                if let Err(w) = self.right_cell_action_witness(ci, &x) {
                    violations.push(Violation {
                        axiom: Axiom::RightCellRelation,
                        witness: w,
                    });
                }
                if let Err(w) = self.left_cell_action_witness(ci, &x) {
                    violations.push(Violation {
                        axiom: Axiom::LeftCellRelation,
                        witness: w,
                    });
                }
            }
            let above = self.datum.positions_above(ci);
            let mut inside = vec![false; n];
            for &p in &above {
                inside[p] = true;
            }
            'ideal: for &p in &above {
                for k in 0..n {
                    for (prod, side) in [(self.mul_basis(p, k), "right"), (self.mul_basis(k, p), "left")] {
                        if let Some((q, _)) = prod.iter().find(|(q, _)| !inside[*q]) {
                            violations.push(Violation {
                                axiom: Axiom::Ideal,
                                witness: format!(
                                    "ideal above {} not closed under {side} multiplication: {} and {} give {}",
                                    self.datum.cell(ci).label,
                                    self.names[p],
                                    self.names[k],
                                    self.names[*q]
                                ),
                            });
                            break 'ideal;
                        }
                    }
                }
            }
        }
        CellularReport { violations }
    }

    /// Expansion of `v` as an element, for display.
    pub fn describe_dense(&self, v: &[Scalar]) -> String {
        self.describe(AlgebraElement::from_dense(v).terms())
    }

    /// Span check helper: is `v` supported on `positions`?
    pub fn supported_on(v: &[Scalar], positions: &[usize]) -> bool {
        let mut w = v.to_vec();
        for &p in positions {
            w[p] = w[p].field().zero();
        }
        is_zero_vec(&w)
    }

    /// `Σ coeffs[i]·rows[i]`, a small helper for building elements.
    pub fn combine(&self, coeffs: &[Scalar], rows: &[Vec<Scalar>]) -> Vec<Scalar> {
        let mut acc = zero_vec(self.field, self.dim());
        for (c, r) in coeffs.iter().zip(rows) {
            axpy(&mut acc, c, r);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn poset_closure_and_cycles() {
        let p = Poset::new(vec![s("a"), s("b"), s("c")], &[(s("a"), s("b")), (s("b"), s("c"))]).unwrap();
        assert!(p.gt(0, 2));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        let err = Poset::new(vec![s("a"), s("b")], &[(s("a"), s("b")), (s("b"), s("a"))]);
        assert!(matches!(err, Err(Error::Poset(_))));
        assert!(Poset::new(vec![s("a"), s("a")], &[]).is_err());
    }

    #[test]
    fn linear_extension_prefers_input_order() {
        let p = Poset::new(vec![s("x"), s("y"), s("z")], &[(s("z"), s("x"))]).unwrap();
        assert_eq!(p.linear_extension(), vec![1, 2, 0]);
    }

    #[test]
    fn saturation() {
        let p = Poset::chain(vec![s("a"), s("b"), s("c")]);
        assert_eq!(p.saturation_witness(&[0, 1]), None);
        assert_eq!(p.saturation_witness(&[1]), Some((0, 1)));
    }

    fn m2() -> Algebra {
        // 2x2 matrices with E_ij E_jk = E_ik
        let f = Field::Rational;
        let poset = Poset::chain(vec![s("2")]);
        let datum = CellDatum::cellular(poset, vec![(s("2"), vec![s("1"), s("2")])]).unwrap();
        let mut table = Table::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    table.insert((i * 2 + j, j * 2 + k), vec![(i * 2 + k, f.one())]);
                }
            }
        }
        let unit = AlgebraElement::from_terms([(0, f.one()), (3, f.one())]);
        Algebra::new(f, datum, table, unit, true, None).unwrap()
    }

    #[test]
    fn matrix_algebra_is_cellular() {
        let a = m2();
        assert!(a.verify_cellular().is_ok());
        let e12 = AlgebraElement::basis(1, a.field());
        let e21 = a.involution(&e12).unwrap();
        assert_eq!(e21, AlgebraElement::basis(2, a.field()));
        assert_eq!(a.involution(&e21).unwrap(), e12);
    }

    #[test]
    fn mutation_is_reported() {
        let a = m2();
        let f = a.field();
        let bad = a.with_product(1, 2, vec![(0, f.from_i64(2))]);
        let r = bad.verify_cellular();
        assert!(!r.is_ok());
        assert!(r.violated(Axiom::Associativity) || r.violated(Axiom::Unit));
    }

    #[test]
    fn cell_coefficients_unit_is_identity() {
        let a = m2();
        let c = a.cell_coefficients("2", "1", a.unit()).unwrap();
        assert_eq!(c, vec![(s("1"), Field::Rational.one()), (s("2"), Field::Rational.zero())]);
    }
}
