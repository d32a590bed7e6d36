//! `.cell.json` and `.quiver.json` files, quiver algebras, and the built-in
//! example algebras.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path as FsPath;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement, CellDatum, CellSpec, Poset, Table};
use crate::alpha::AlphaDatum;
use crate::error::{Error, Result};
use crate::linalg::{zero_vec, ExactMatrix, Field, Scalar, Span};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// .cell.json

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub labels: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CellFile {
    pub label: String,
    pub indices: Vec<String>,
}

/// `[λ, s, t]`
pub type BasisRef = (String, String, String);
/// `[λ, s, t, "num/den"]`
pub type Term = (String, String, String, String);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ProductFile {
    pub left: BasisRef,
    pub right: BasisRef,
    pub result: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct IdempotentFile {
    pub label: String,
    pub expansion: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlphaFile {
    pub lambda_tilde: PosetFile,
    pub lambda: Vec<String>,
    pub idempotents: Vec<IdempotentFile>,
    pub x: PosetFile,
    pub map: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub schema: u32,
    pub field: String,
    pub lambda_plus: PosetFile,
    pub cells: Vec<CellFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub names: Vec<(String, String, String, String)>,
    pub unit: Vec<Term>,
    pub products: Vec<ProductFile>,
    #[serde(default = "yes")]
    pub involution_check: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaFile>,
}

fn yes() -> bool {
    true
}

fn build_poset(p: &PosetFile, path: &str) -> Result<Poset> {
    Poset::new(p.labels.clone(), &p.covers).map_err(|e| match e {
        Error::UnknownLabel(l) => schema_err(format!("{path}.covers"), format!("unknown label {l:?}")),
        other => other,
    })
}

fn poset_file(p: &Poset) -> PosetFile {
    PosetFile {
        labels: p.labels().to_vec(),
        covers: p
            .covers()
            .into_iter()
            .map(|(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
            .collect(),
    }
}

fn lookup(datum: &CellDatum, r: &BasisRef, path: &str) -> Result<usize> {
    let ci = datum
        .cell_index(&r.0)
        .map_err(|_| schema_err(path, format!("unknown cell {:?}", r.0)))?;
    let cell = datum.cell(ci);
    let s = cell
        .row_index(&r.1)
        .ok_or_else(|| schema_err(path, format!("{:?} is not in T({})", r.1, r.0)))?;
    let t = cell
        .col_index(&r.2)
        .ok_or_else(|| schema_err(path, format!("{:?} is not in T({})", r.2, r.0)))?;
    Ok(cell.position(s, t))
}

fn parse_terms(field: Field, datum: &CellDatum, terms: &[Term], path: &str) -> Result<Vec<(usize, Scalar)>> {
    terms
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let p = format!("{path}[{k}]");
            let pos = lookup(datum, &(t.0.clone(), t.1.clone(), t.2.clone()), &p)?;
            let c = field
                .parse_scalar(&t.3)
                .map_err(|e| schema_err(format!("{p}[3]"), e.to_string()))?;
            Ok((pos, c))
        })
        .collect()
}

fn basis_ref(datum: &CellDatum, pos: usize) -> BasisRef {
    let (ci, r, c) = datum.locate(pos);
    let cell = datum.cell(ci);
    (cell.label.clone(), cell.rows[r].clone(), cell.cols[c].clone())
}

fn terms_out(datum: &CellDatum, terms: &[(usize, Scalar)]) -> Vec<Term> {
    terms
        .iter()
        .map(|(p, c)| {
            let (l, s, t) = basis_ref(datum, *p);
            (l, s, t, c.to_fraction_string())
        })
        .collect()
}

/// Parses a `.cell.json` document. The unit is re-verified; the full
/// cellular axioms are left to [`Algebra::verify_cellular`].
pub fn parse_cell_json(bytes: &[u8]) -> Result<(Algebra, Option<AlphaDatum>)> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let file: AlgebraFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema_err(path, e.into_inner().to_string())
    })?;
    from_file(&file)
}

pub fn from_file(file: &AlgebraFile) -> Result<(Algebra, Option<AlphaDatum>)> {
    if file.schema != SCHEMA_VERSION {
        return Err(schema_err("schema", format!("unsupported schema version {}", file.schema)));
    }
    let field: Field = file
        .field
        .parse()
        .map_err(|e: Error| schema_err("field", e.to_string()))?;
    if file.lambda_plus.labels.is_empty() {
        return Err(schema_err("lambda_plus.labels", "Λ⁺ must not be empty"));
    }
    let poset = build_poset(&file.lambda_plus, "lambda_plus")?;
    for (k, c) in file.cells.iter().enumerate() {
        if c.indices.is_empty() {
            return Err(schema_err(format!("cells[{k}].indices"), format!("T({}) is empty", c.label)));
        }
    }
    let datum = CellDatum::cellular(
        poset,
        file.cells.iter().map(|c| (c.label.clone(), c.indices.clone())).collect(),
    )
    .map_err(|e| match e {
        Error::InvalidAlgebra(m) => schema_err("cells", m),
        Error::UnknownLabel(l) => schema_err("cells", format!("cell {l:?} is not in Λ⁺")),
        other => other,
    })?;
    let mut names: Option<Vec<String>> = None;
    if !file.names.is_empty() {
        let mut v: Vec<String> = (0..datum.dim()).map(|p| datum.default_name(p)).collect();
        for (k, n) in file.names.iter().enumerate() {
            let pos = lookup(&datum, &(n.0.clone(), n.1.clone(), n.2.clone()), &format!("names[{k}]"))?;
            v[pos] = n.3.clone();
        }
        names = Some(v);
    }
    let unit = AlgebraElement::from_terms(parse_terms(field, &datum, &file.unit, "unit")?);
    let mut table = Table::new();
    for (k, pr) in file.products.iter().enumerate() {
        let path = format!("products[{k}]");
        let i = lookup(&datum, &pr.left, &format!("{path}.left"))?;
        let j = lookup(&datum, &pr.right, &format!("{path}.right"))?;
        let terms = parse_terms(field, &datum, &pr.result, &format!("{path}.result"))?;
        if table.insert((i, j), terms).is_some() {
            return Err(schema_err(path, "product given twice"));
        }
    }
    let alg = Algebra::new(field, datum, table, unit, file.involution_check, names)?;
    if let Some(v) = alg.unit_violations().first() {
        return Err(schema_err("unit", format!("stored unit is not an identity: {}", v.witness)));
    }
    let alpha = match &file.alpha {
        None => None,
        Some(a) => Some(parse_alpha(field, alg.datum(), a)?),
    };
    Ok((alg, alpha))
}

fn parse_alpha(field: Field, datum: &CellDatum, a: &AlphaFile) -> Result<AlphaDatum> {
    let lt = build_poset(&a.lambda_tilde, "alpha.lambda_tilde")?;
    let x = build_poset(&a.x, "alpha.x")?;
    let mut idem = Vec::new();
    for mu in &a.lambda {
        let k = a
            .idempotents
            .iter()
            .position(|e| &e.label == mu)
            .ok_or_else(|| schema_err("alpha.idempotents", format!("no idempotent for {mu:?}")))?;
        let terms = parse_terms(field, datum, &a.idempotents[k].expansion, &format!("alpha.idempotents[{k}].expansion"))?;
        idem.push(AlgebraElement::from_terms(terms));
    }
    if a.idempotents.len() != a.lambda.len() {
        return Err(schema_err("alpha.idempotents", "one idempotent per element of Λ expected"));
    }
    AlphaDatum::new(lt, a.lambda.clone(), idem, x, &a.map)
}

/// Deterministic document for an algebra (and datum). `parse_cell_json`
/// of the output gives back the same objects.
pub fn to_file(alg: &Algebra, alpha: Option<&AlphaDatum>) -> AlgebraFile {
    let datum = alg.datum();
    let names = (0..alg.dim())
        .filter(|&p| alg.name(p) != datum.default_name(p))
        .map(|p| {
            let (l, s, t) = basis_ref(datum, p);
            (l, s, t, alg.name(p).to_string())
        })
        .collect();
    let products = alg
        .table()
        .iter()
        .map(|((i, j), terms)| ProductFile {
            left: basis_ref(datum, *i),
            right: basis_ref(datum, *j),
            result: terms_out(datum, terms),
        })
        .collect();
    AlgebraFile {
        schema: SCHEMA_VERSION,
        field: alg.field().to_string(),
        lambda_plus: poset_file(datum.poset()),
        cells: datum
            .cells()
            .iter()
            .map(|c| CellFile {
                label: c.label.clone(),
                indices: c.rows.clone(),
            })
            .collect(),
        names,
        unit: terms_out(datum, alg.unit().terms()),
        products,
        involution_check: alg.is_involutive(),
        alpha: alpha.map(|a| AlphaFile {
            lambda_tilde: poset_file(&a.lambda_tilde),
            lambda: a.lambda.clone(),
            idempotents: a
                .lambda
                .iter()
                .zip(&a.idempotents)
                .map(|(l, e)| IdempotentFile {
                    label: l.clone(),
                    expansion: terms_out(datum, e.terms()),
                })
                .collect(),
            x: poset_file(&a.x),
            map: a.map_pairs(),
        }),
    }
}

pub fn serialize_cell_json(alg: &Algebra, alpha: Option<&AlphaDatum>) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(alg, alpha)).expect("serializable");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// quivers

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A path: a vertex idempotent or a nonempty arrow sequence, composed left
/// to right (`ab` is first `a`, then `b`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QPath {
    Vertex(usize),
    Arrows(Vec<usize>),
}

impl QPath {
    pub fn len(&self) -> usize {
        match self {
            QPath::Vertex(_) => 0,
            QPath::Arrows(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub field: Field,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// Each relation is a linear combination of paths.
    pub relations: Vec<Vec<(Scalar, QPath)>>,
}

impl Quiver {
    pub fn new(field: Field, vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Quiver> {
        let vidx = |v: &str| -> Result<usize> {
            vertices
                .iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::UnknownLabel(v.to_string()))
        };
        let mut out = Vec::new();
        for (label, s, t) in arrows {
            if out.iter().any(|a: &Arrow| a.label == label) {
                return Err(Error::InvalidParameters(format!("arrow {label} declared twice")));
            }
            out.push(Arrow {
                source: vidx(&s)?,
                target: vidx(&t)?,
                label,
            });
        }
        Ok(Quiver {
            field,
            vertices,
            arrows: out,
            relations: Vec::new(),
        })
    }

    pub fn arrow_index(&self, label: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// A path from arrow labels; the arrows must compose.
    pub fn path(&self, labels: &[&str]) -> Result<QPath> {
        let idx: Vec<usize> = labels.iter().map(|l| self.arrow_index(l)).collect::<Result<_>>()?;
        if idx.is_empty() {
            return Err(Error::InvalidParameters("empty arrow list; use a vertex path".into()));
        }
        for w in idx.windows(2) {
            if self.arrows[w[0]].target != self.arrows[w[1]].source {
                return Err(Error::InvalidParameters(format!(
                    "{} then {} does not compose",
                    self.arrows[w[0]].label, self.arrows[w[1]].label
                )));
            }
        }
        Ok(QPath::Arrows(idx))
    }

    pub fn source(&self, p: &QPath) -> usize {
        match p {
            QPath::Vertex(v) => *v,
            QPath::Arrows(a) => self.arrows[a[0]].source,
        }
    }

    pub fn target(&self, p: &QPath) -> usize {
        match p {
            QPath::Vertex(v) => *v,
            QPath::Arrows(a) => self.arrows[*a.last().expect("nonempty")].target,
        }
    }

    /// `p` then `q`, or `None` when they do not compose.
    pub fn concat(&self, p: &QPath, q: &QPath) -> Option<QPath> {
        if self.target(p) != self.source(q) {
            return None;
        }
        Some(match (p, q) {
            (QPath::Vertex(_), _) => q.clone(),
            (_, QPath::Vertex(_)) => p.clone(),
            (QPath::Arrows(a), QPath::Arrows(b)) => {
                let mut v = a.clone();
                v.extend(b);
                QPath::Arrows(v)
            }
        })
    }

    pub fn path_name(&self, p: &QPath) -> String {
        match p {
            QPath::Vertex(v) => format!("e{}", self.vertices[*v]),
            QPath::Arrows(a) => a.iter().map(|&i| self.arrows[i].label.as_str()).collect(),
        }
    }

    /// All paths of length `len`.
    pub fn paths_of_length(&self, len: usize) -> Vec<QPath> {
        if len == 0 {
            return (0..self.vertices.len()).map(QPath::Vertex).collect();
        }
        let mut cur: Vec<Vec<usize>> = (0..self.arrows.len()).map(|a| vec![a]).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for p in &cur {
                let t = self.arrows[*p.last().expect("nonempty")].target;
                for (a, arr) in self.arrows.iter().enumerate() {
                    if arr.source == t {
                        let mut q = p.clone();
                        q.push(a);
                        next.push(q);
                    }
                }
            }
            cur = next;
        }
        cur.into_iter().map(QPath::Arrows).collect()
    }

    pub fn add_relation(&mut self, terms: Vec<(Scalar, QPath)>) -> Result<()> {
        if terms.is_empty() {
            return Err(Error::InvalidParameters("empty relation".into()));
        }
        let d = terms[0].1.len();
        if terms.iter().any(|(_, p)| p.len() != d) {
            return Err(Error::InvalidParameters(
                "relations must be homogeneous in path length".into(),
            ));
        }
        if let Some((c, _)) = terms.iter().find(|(c, _)| c.field() != self.field) {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: c.field(),
            });
        }
        self.relations.push(terms);
        Ok(())
    }
}

/// A quotient of a path algebra with its standard-monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathAlgebra {
    pub quiver: Quiver,
    /// Basis paths, by length and then increasing path order.
    pub monomials: Vec<QPath>,
    /// `monomials[i]·monomials[j]` in the monomial basis.
    pub table: Table,
    /// Normal forms of every path of length below `nilpotency`.
    normal_forms: HashMap<QPath, Vec<(usize, Scalar)>>,
    /// Every path of this length or longer is zero.
    pub nilpotency: usize,
}

impl PathAlgebra {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Normal form of a path in the monomial basis.
    pub fn normal_form(&self, p: &QPath) -> Vec<(usize, Scalar)> {
        self.normal_forms.get(p).cloned().unwrap_or_default()
    }

    pub fn names(&self) -> Vec<String> {
        self.monomials.iter().map(|p| self.quiver.path_name(p)).collect()
    }

    /// Dense normal form of a combination of paths.
    pub fn reduce(&self, terms: &[(Scalar, QPath)]) -> Vec<Scalar> {
        let f = self.quiver.field;
        let mut v = zero_vec(f, self.dim());
        for (c, p) in terms {
            for (k, x) in self.normal_form(p) {
                v[k] = &v[k] + &(c * &x);
            }
        }
        v
    }
}

/// Builds `kQ/I` degree by degree. In each path length `L` the ideal part is
/// spanned by `u·r·v` for relations `r`; echelon reduction with paths in
/// decreasing order (lexicographic in arrow declaration order) makes the
/// largest path of each relation the one rewritten. Stops at the first
/// length with no surviving path; fails if that length exceeds `cap`.
pub fn build_path_algebra(q: &Quiver, cap: Option<usize>) -> Result<PathAlgebra> {
    let f = q.field;
    let cap = cap.unwrap_or(2 * q.vertices.len());
    let mut monomials: Vec<QPath> = Vec::new();
    let mut normal_forms: HashMap<QPath, Vec<(usize, Scalar)>> = HashMap::new();
    let mut nilpotency = None;
    // per degree: paths sorted decreasing, with their column index
    let mut by_len: Vec<Vec<QPath>> = Vec::new();
    for len in 0..=cap {
        let mut paths = q.paths_of_length(len);
        paths.sort();
        paths.reverse();
        if paths.is_empty() {
            nilpotency = Some(len);
            break;
        }
        let col: HashMap<&QPath, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut span = Span::new(f, paths.len());
        for r in &q.relations {
            let d = r[0].1.len();
            if d > len {
                continue;
            }
            for a in 0..=len - d {
                let b = len - d - a;
                for u in &by_len_or(q, &by_len, a) {
                    for v in &by_len_or(q, &by_len, b) {
                        let mut vec = zero_vec(f, paths.len());
                        let mut any = false;
                        for (c, p) in r {
                            let Some(up) = q.concat(u, p) else { continue };
                            let Some(upv) = q.concat(&up, v) else { continue };
                            let k = col[&upv];
                            vec[k] = &vec[k] + c;
                            any = true;
                        }
                        if any {
                            span.insert(vec);
                        }
                    }
                }
            }
        }
        let pivots: Vec<usize> = span.pivots().to_vec();
        let survivors: Vec<usize> = (0..paths.len()).filter(|c| !pivots.contains(c)).collect();
        if survivors.is_empty() {
            nilpotency = Some(len);
            break;
        }
        // survivors in increasing path order
        let base = monomials.len();
        let mut index_of = HashMap::new();
        for (k, &c) in survivors.iter().rev().enumerate() {
            index_of.insert(c, base + k);
            monomials.push(paths[c].clone());
        }
        for (c, p) in paths.iter().enumerate() {
            let nf = if let Some(&m) = index_of.get(&c) {
                vec![(m, f.one())]
            } else {
                let k = pivots.iter().position(|&x| x == c).expect("pivot");
                let row = &span.basis()[k];
                survivors
                    .iter()
                    .filter(|&&s| !row[s].is_zero())
                    .map(|&s| (index_of[&s], -&row[s]))
                    .collect()
            };
            normal_forms.insert(p.clone(), nf);
        }
        by_len.push(paths);
    }
    let nilpotency = nilpotency.ok_or(Error::NotFiniteWithinCap { cap })?;
    let mut table = Table::new();
    for (i, p) in monomials.iter().enumerate() {
        for (j, r) in monomials.iter().enumerate() {
            if let Some(pr) = q.concat(p, r) {
                let nf = normal_forms.get(&pr).cloned().unwrap_or_default();
                if !nf.is_empty() {
                    table.insert((i, j), nf);
                }
            }
        }
    }
    Ok(PathAlgebra {
        quiver: q.clone(),
        monomials,
        table,
        normal_forms,
        nilpotency,
    })
}

fn by_len_or(q: &Quiver, by_len: &[Vec<QPath>], len: usize) -> Vec<QPath> {
    by_len.get(len).cloned().unwrap_or_else(|| q.paths_of_length(len))
}

/// A cellular structure on a path algebra: each cell entry is a combination
/// of paths, listed row-major.
pub struct PathCells {
    pub lambda_plus: Poset,
    pub cells: Vec<(String, Vec<String>, Vec<Vec<(Scalar, QPath)>>)>,
}

/// Re-expresses a path algebra in the basis given by `cells`.
pub fn cellular_from_paths(pa: &PathAlgebra, pc: &PathCells) -> Result<Algebra> {
    let f = pa.quiver.field;
    let specs: Vec<CellSpec> = pc
        .cells
        .iter()
        .map(|(l, t, _)| (l.clone(), t.clone(), t.clone()))
        .collect();
    let datum = CellDatum::new(pc.lambda_plus.clone(), specs)?;
    if datum.dim() != pa.dim() {
        return Err(Error::InvalidAlgebra(format!(
            "cells give {} basis elements but the algebra has dimension {}",
            datum.dim(),
            pa.dim()
        )));
    }
    let mut rows = vec![Vec::new(); datum.dim()];
    let mut names = vec![String::new(); datum.dim()];
    for (label, t, entries) in &pc.cells {
        if entries.len() != t.len() * t.len() {
            return Err(Error::InvalidAlgebra(format!("cell {label} needs {} entries", t.len() * t.len())));
        }
        let ci = datum.cell_index(label)?;
        let cell = datum.cell(ci);
        for (k, e) in entries.iter().enumerate() {
            let pos = cell.position(k / t.len(), k % t.len());
            rows[pos] = pa.reduce(e);
            names[pos] = match e.as_slice() {
                [(c, p)] if c.is_one() => pa.quiver.path_name(p),
                _ => datum.default_name(pos),
            };
        }
    }
    let m = ExactMatrix::from_rows(f, pa.dim(), rows.clone())?;
    let inv = m
        .inverse()
        .ok_or_else(|| Error::InvalidAlgebra("cell elements are not a basis".into()))?;
    let to_cell = |v: &[Scalar]| -> Vec<(usize, Scalar)> {
        AlgebraElement::from_dense(&inv.vec_mul(v).expect("dimension")).terms().to_vec()
    };
    let mul = |a: &[Scalar], b: &[Scalar]| -> Vec<Scalar> {
        let mut out = zero_vec(f, pa.dim());
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                if let Some(t) = pa.table.get(&(i, j)) {
                    for (k, c) in t {
                        out[*k] = &out[*k] + &(&(x * y) * c);
                    }
                }
            }
        }
        out
    };
    let mut table = Table::new();
    for i in 0..pa.dim() {
        for j in 0..pa.dim() {
            let t = to_cell(&mul(&rows[i], &rows[j]));
            if !t.is_empty() {
                table.insert((i, j), t);
            }
        }
    }
    let one: Vec<(Scalar, QPath)> = (0..pa.quiver.vertices.len())
        .map(|v| (f.one(), QPath::Vertex(v)))
        .collect();
    let unit = AlgebraElement::from_terms(to_cell(&pa.reduce(&one)));
    Algebra::new(f, datum, table, unit, true, Some(names))
}

// .quiver.json

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PathTermFile {
    pub coeff: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arrows: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ArrowFile {
    pub label: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PathCellFile {
    pub label: String,
    pub indices: Vec<String>,
    /// Row-major entries `c_{st}`, each a combination of paths.
    pub entries: Vec<Vec<PathTermFile>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PathIdempotentFile {
    pub label: String,
    pub expansion: Vec<PathTermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PathAlphaFile {
    pub lambda_tilde: PosetFile,
    pub lambda: Vec<String>,
    pub idempotents: Vec<PathIdempotentFile>,
    pub x: PosetFile,
    pub map: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CellularSection {
    pub lambda_plus: PosetFile,
    pub cells: Vec<PathCellFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<PathAlphaFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub schema: u32,
    #[serde(default = "rational")]
    pub field: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowFile>,
    #[serde(default)]
    pub relations: Vec<Vec<PathTermFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cellular: Option<CellularSection>,
}

fn rational() -> String {
    "rational".into()
}

/// Parsed `.quiver.json`: the path algebra, and when a cellular section is
/// present, the algebra in that basis with its optional α datum.
pub struct QuiverInput {
    pub path_algebra: PathAlgebra,
    pub cellular: Option<(Algebra, Option<AlphaDatum>)>,
}

fn path_term(q: &Quiver, t: &PathTermFile, path: &str) -> Result<(Scalar, QPath)> {
    let c = q
        .field
        .parse_scalar(&t.coeff)
        .map_err(|e| schema_err(format!("{path}.coeff"), e.to_string()))?;
    let p = match (&t.vertex, t.arrows.is_empty()) {
        (Some(v), true) => QPath::Vertex(
            q.vertex_index(v)
                .map_err(|_| schema_err(format!("{path}.vertex"), format!("unknown vertex {v:?}")))?,
        ),
        (None, false) => {
            let labels: Vec<&str> = t.arrows.iter().map(String::as_str).collect();
            q.path(&labels)
                .map_err(|e| schema_err(format!("{path}.arrows"), e.to_string()))?
        }
        _ => return Err(schema_err(path, "give exactly one of vertex or arrows")),
    };
    Ok((c, p))
}

pub fn parse_quiver_json(bytes: &[u8]) -> Result<QuiverInput> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let file: QuiverFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema_err(path, e.into_inner().to_string())
    })?;
    if file.schema != SCHEMA_VERSION {
        return Err(schema_err("schema", format!("unsupported schema version {}", file.schema)));
    }
    let field: Field = file
        .field
        .parse()
        .map_err(|e: Error| schema_err("field", e.to_string()))?;
    if file.vertices.is_empty() {
        return Err(schema_err("vertices", "no vertices"));
    }
    let mut q = Quiver::new(
        field,
        file.vertices.clone(),
        file.arrows
            .iter()
            .map(|a| (a.label.clone(), a.source.clone(), a.target.clone()))
            .collect(),
    )
    .map_err(|e| schema_err("arrows", e.to_string()))?;
    for (k, r) in file.relations.iter().enumerate() {
        let terms = r
            .iter()
            .enumerate()
            .map(|(i, t)| path_term(&q, t, &format!("relations[{k}][{i}]")))
            .collect::<Result<Vec<_>>>()?;
        q.add_relation(terms)
            .map_err(|e| schema_err(format!("relations[{k}]"), e.to_string()))?;
    }
    let pa = build_path_algebra(&q, file.cap)?;
    let cellular = match &file.cellular {
        None => None,
        Some(sec) => {
            if sec.lambda_plus.labels.is_empty() {
                return Err(schema_err("cellular.lambda_plus.labels", "Λ⁺ must not be empty"));
            }
            let poset = build_poset(&sec.lambda_plus, "cellular.lambda_plus")?;
            let mut cells = Vec::new();
            for (k, c) in sec.cells.iter().enumerate() {
                if c.indices.is_empty() {
                    return Err(schema_err(format!("cellular.cells[{k}].indices"), "empty index set"));
                }
                let entries = c
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        e.iter()
                            .enumerate()
                            .map(|(j, t)| path_term(&q, t, &format!("cellular.cells[{k}].entries[{i}][{j}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                cells.push((c.label.clone(), c.indices.clone(), entries));
            }
            let alg = cellular_from_paths(&pa, &PathCells { lambda_plus: poset, cells })?;
            let alpha = match &sec.alpha {
                None => None,
                Some(a) => {
                    let lt = build_poset(&a.lambda_tilde, "cellular.alpha.lambda_tilde")?;
                    let x = build_poset(&a.x, "cellular.alpha.x")?;
                    let mut idem = Vec::new();
                    for mu in &a.lambda {
                        let (k, e) = a
                            .idempotents
                            .iter()
                            .enumerate()
                            .find(|(_, e)| &e.label == mu)
                            .ok_or_else(|| schema_err("cellular.alpha.idempotents", format!("no idempotent for {mu:?}")))?;
                        let terms = e
                            .expansion
                            .iter()
                            .enumerate()
                            .map(|(j, t)| path_term(&q, t, &format!("cellular.alpha.idempotents[{k}].expansion[{j}]")))
                            .collect::<Result<Vec<_>>>()?;
                        idem.push(express_in_cells(&pa, &alg, &terms)?);
                    }
                    Some(AlphaDatum::new(lt, a.lambda.clone(), idem, x, &a.map)?)
                }
            };
            Some((alg, alpha))
        }
    };
    Ok(QuiverInput {
        path_algebra: pa,
        cellular,
    })
}

/// Coordinates of a path combination in the cell basis of `alg`, which must
/// have been built from `pa` by [`cellular_from_paths`].
fn express_in_cells(pa: &PathAlgebra, alg: &Algebra, terms: &[(Scalar, QPath)]) -> Result<AlgebraElement> {
    // The cell basis elements are recovered from their names only when they
    // are single paths; in general solve against all cell elements.
    let f = pa.quiver.field;
    let target = pa.reduce(terms);
    let mut rows = Vec::with_capacity(alg.dim());
    for p in 0..alg.dim() {
        // the algebra basis element as a path combination: its name is a
        // path name or a default name, so rebuild through the table of
        // products with the unit instead
        rows.push(cell_vector(pa, alg, p)?);
    }
    let m = ExactMatrix::from_rows(f, pa.dim(), rows)?.transpose();
    let x = m
        .solve(&target)?
        .ok_or_else(|| Error::InvalidAlpha("idempotent is not in the algebra".into()))?;
    Ok(AlgebraElement::from_dense(&x))
}

fn cell_vector(pa: &PathAlgebra, alg: &Algebra, pos: usize) -> Result<Vec<Scalar>> {
    let name = alg.name(pos);
    let idx = pa
        .names()
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::InvalidAlpha(format!("cell element {name} is not a single path")))?;
    let mut v = zero_vec(pa.quiver.field, pa.dim());
    v[idx] = pa.quiver.field.one();
    Ok(v)
}

// ---------------------------------------------------------------------------
// built-ins

/// `M_n` with the single cell `n` and basis `E(i,j)`.
pub fn matrix_algebra(n: usize, field: Field) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    let lbl = n.to_string();
    let t: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let datum = CellDatum::cellular(Poset::chain(vec![lbl.clone()]), vec![(lbl, t)])?;
    let mut table = Table::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                table.insert((i * n + j, j * n + k), vec![(i * n + k, field.one())]);
            }
        }
    }
    let unit = AlgebraElement::from_terms((0..n).map(|i| (i * n + i, field.one())));
    let mut names = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            names.push(format!("E{i},{j}"));
        }
    }
    Algebra::new(field, datum, table, unit, true, Some(names))
}

/// The datum on `M_n`: `e_k = E(k,k)`, Λ̃ = Λ = {1..n} with the integer
/// order, X = {l > s}, `α(k) = l` iff `k ≥ b`.
pub fn matrix_alpha(n: usize, b: usize, field: Field) -> Result<AlphaDatum> {
    if !(1 < b && b <= n) {
        return Err(Error::InvalidParameters(format!("need 1 < b <= n, got n={n}, b={b}")));
    }
    let labels: Vec<String> = (1..=n).rev().map(|i| i.to_string()).collect();
    let lt = Poset::chain(labels);
    let lambda: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let idem = (0..n)
        .map(|k| AlgebraElement::basis(k * n + k, field))
        .collect();
    let x = Poset::chain(vec!["l".into(), "s".into()]);
    let map: Vec<(String, String)> = (1..=n)
        .map(|k| (k.to_string(), if k >= b { "l" } else { "s" }.to_string()))
        .collect();
    AlphaDatum::new(lt, lambda, idem, x, &map)
}

/// The five-vertex double-arrow quiver with its zero and binomial relations.
pub fn paper_quiver(field: Field) -> Result<Quiver> {
    let vertices: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for i in 1..=4 {
        arrows.push((format!("a{}{}", i, i + 1), i.to_string(), (i + 1).to_string()));
        arrows.push((format!("a{}{}", i + 1, i), (i + 1).to_string(), i.to_string()));
    }
    let mut q = Quiver::new(field, vertices, arrows)?;
    let one = field.one();
    let zero_rel = [
        ["a12", "a23"],
        ["a23", "a34"],
        ["a34", "a45"],
        ["a54", "a43"],
        ["a43", "a32"],
        ["a32", "a21"],
    ];
    for r in zero_rel {
        let p = q.path(&r)?;
        q.add_relation(vec![(one.clone(), p)])?;
    }
    let binom = [
        (["a21", "a12"], ["a23", "a32"]),
        (["a32", "a23"], ["a34", "a43"]),
        (["a43", "a34"], ["a45", "a54"]),
    ];
    for (a, b) in binom {
        let (pa, pb) = (q.path(&a)?, q.path(&b)?);
        q.add_relation(vec![(one.clone(), pa), (-&one, pb)])?;
    }
    Ok(q)
}

/// Labels `λ0..λ5`.
pub fn lam(i: usize) -> String {
    format!("λ{i}")
}

fn path_cells(q: &Quiver) -> Result<PathCells> {
    let f = q.field;
    let one = || f.one();
    let p = |labels: &[&str]| -> Result<Vec<(Scalar, QPath)>> { Ok(vec![(one(), q.path(labels)?)]) };
    let v = |i: usize| vec![(one(), QPath::Vertex(i - 1))];
    let mut cells = vec![(lam(0), vec!["1".to_string()], vec![p(&["a12", "a21"])?])];
    for i in 1..=4 {
        let fwd = format!("a{}{}", i, i + 1);
        let bwd = format!("a{}{}", i + 1, i);
        cells.push((
            lam(i),
            vec![i.to_string(), (i + 1).to_string()],
            vec![v(i), p(&[&fwd])?, p(&[&bwd])?, p(&[&bwd, &fwd])?],
        ));
    }
    cells.push((lam(5), vec!["5".to_string()], vec![v(5)]));
    Ok(PathCells {
        lambda_plus: Poset::chain((0..=5).map(lam).collect()),
        cells,
    })
}

/// The path algebra example with cells `λ0 > ... > λ5`, vertex idempotents
/// and the three-valued α.
pub fn build_paper_quiver_example(field: Field) -> Result<(Algebra, AlphaDatum)> {
    let q = paper_quiver(field)?;
    let pa = build_path_algebra(&q, None)?;
    let alg = cellular_from_paths(&pa, &path_cells(&q)?)?;
    let mut lt_labels = Vec::new();
    for i in 0..=5 {
        lt_labels.push(lam(i));
        if i >= 1 {
            lt_labels.push(i.to_string());
        }
    }
    let lt = Poset::chain(lt_labels);
    let lambda: Vec<String> = (1..=5).map(|i| i.to_string()).collect();
    let idem = (1..=5)
        .map(|i| {
            let pos = alg
                .position_by_name(&format!("e{i}"))
                .expect("vertex idempotent is a basis element");
            AlgebraElement::basis(pos, field)
        })
        .collect();
    let x = Poset::chain(vec!["t0".into(), "t123".into(), "t45".into()]);
    let mut map = vec![(lam(0), "t0".to_string())];
    for i in 1..=5 {
        let t = if i <= 3 { "t123" } else { "t45" };
        map.push((lam(i), t.to_string()));
        map.push((i.to_string(), t.to_string()));
    }
    let ad = AlphaDatum::new(lt, lambda, idem, x, &map)?;
    Ok((alg, ad))
}

/// A `.quiver.json` document describing the path example, including its
/// cellular section and α datum.
pub fn paper_quiver_file() -> QuiverFile {
    let term = |arrows: &[&str]| PathTermFile {
        coeff: "1".into(),
        vertex: None,
        arrows: arrows.iter().map(|s| s.to_string()).collect(),
    };
    let vterm = |v: usize| PathTermFile {
        coeff: "1".into(),
        vertex: Some(v.to_string()),
        arrows: Vec::new(),
    };
    let mut arrows = Vec::new();
    for i in 1..=4 {
        arrows.push(ArrowFile {
            label: format!("a{}{}", i, i + 1),
            source: i.to_string(),
            target: (i + 1).to_string(),
        });
        arrows.push(ArrowFile {
            label: format!("a{}{}", i + 1, i),
            source: (i + 1).to_string(),
            target: i.to_string(),
        });
    }
    let mut relations: Vec<Vec<PathTermFile>> = [
        ["a12", "a23"],
        ["a23", "a34"],
        ["a34", "a45"],
        ["a54", "a43"],
        ["a43", "a32"],
        ["a32", "a21"],
    ]
    .iter()
    .map(|r| vec![term(r)])
    .collect();
    for (a, b) in [
        (["a21", "a12"], ["a23", "a32"]),
        (["a32", "a23"], ["a34", "a43"]),
        (["a43", "a34"], ["a45", "a54"]),
    ] {
        let mut neg = term(&b);
        neg.coeff = "-1".into();
        relations.push(vec![term(&a), neg]);
    }
    let chain = |labels: Vec<String>| PosetFile {
        covers: labels.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect(),
        labels,
    };
    let mut cells = vec![PathCellFile {
        label: lam(0),
        indices: vec!["1".into()],
        entries: vec![vec![term(&["a12", "a21"])]],
    }];
    for i in 1..=4 {
        let fwd = format!("a{}{}", i, i + 1);
        let bwd = format!("a{}{}", i + 1, i);
        cells.push(PathCellFile {
            label: lam(i),
            indices: vec![i.to_string(), (i + 1).to_string()],
            entries: vec![vec![vterm(i)], vec![term(&[&fwd])], vec![term(&[&bwd])], vec![term(&[&bwd, &fwd])]],
        });
    }
    cells.push(PathCellFile {
        label: lam(5),
        indices: vec!["5".into()],
        entries: vec![vec![vterm(5)]],
    });
    let mut lt = Vec::new();
    for i in 0..=5 {
        lt.push(lam(i));
        if i >= 1 {
            lt.push(i.to_string());
        }
    }
    let mut map = vec![(lam(0), "t0".to_string())];
    for i in 1..=5 {
        let t = if i <= 3 { "t123" } else { "t45" };
        map.push((lam(i), t.to_string()));
        map.push((i.to_string(), t.to_string()));
    }
    QuiverFile {
        schema: SCHEMA_VERSION,
        field: "rational".into(),
        vertices: (1..=5).map(|i| i.to_string()).collect(),
        arrows,
        relations,
        cap: Some(3),
        cellular: Some(CellularSection {
            lambda_plus: chain((0..=5).map(lam).collect()),
            cells,
            alpha: Some(PathAlphaFile {
                lambda_tilde: chain(lt),
                lambda: (1..=5).map(|i| i.to_string()).collect(),
                idempotents: (1..=5)
                    .map(|i| PathIdempotentFile {
                        label: i.to_string(),
                        expansion: vec![vterm(i)],
                    })
                    .collect(),
                x: chain(vec!["t0".into(), "t123".into(), "t45".into()]),
                map,
            }),
        }),
    }
}

/// A built-in algebra addressable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    PathExample,
    Matrix { n: usize, b: Option<usize> },
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Builtin> {
        if s == "path-example" {
            return Ok(Builtin::PathExample);
        }
        let rest = s
            .strip_prefix("matrix:")
            .ok_or_else(|| Error::Parse(format!("unknown built-in {s:?} (expected path-example or matrix:n=<n>,b=<b>)")))?;
        let mut n = None;
        let mut b = None;
        for part in rest.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad parameter {part:?} in {s:?}")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad value {v:?} in {s:?}")))?;
            match k.trim() {
                "n" => n = Some(v),
                "b" => b = Some(v),
                _ => return Err(Error::Parse(format!("unknown parameter {k:?} in {s:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse(format!("missing n in {s:?}")))?;
        if n == 0 {
            return Err(Error::InvalidParameters("n must be at least 1".into()));
        }
        if let Some(b) = b {
            if !(1 < b && b <= n) {
                return Err(Error::InvalidParameters(format!("need 1 < b <= n, got n={n}, b={b}")));
            }
        }
        Ok(Builtin::Matrix { n, b })
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::PathExample => write!(f, "path-example"),
            Builtin::Matrix { n, b: Some(b) } => write!(f, "matrix:n={n},b={b}"),
            Builtin::Matrix { n, b: None } => write!(f, "matrix:n={n}"),
        }
    }
}

impl Builtin {
    pub fn build(&self, field: Field) -> Result<(Algebra, Option<AlphaDatum>)> {
        match *self {
            Builtin::PathExample => {
                let (a, d) = build_paper_quiver_example(field)?;
                Ok((a, Some(d)))
            }
            Builtin::Matrix { n, b } => {
                let a = matrix_algebra(n, field)?;
                let d = b.map(|b| matrix_alpha(n, b, field)).transpose()?;
                Ok((a, d))
            }
        }
    }
}

/// Loads a `.cell.json` or `.quiver.json` file (by extension).
pub fn load_file(path: &FsPath) -> Result<(Algebra, Option<AlphaDatum>)> {
    load_file_over(path, None)
}

/// As [`load_file`], with the file's `field` replaced when `field` is given.
pub fn load_file_over(path: &FsPath, field: Option<Field>) -> Result<(Algebra, Option<AlphaDatum>)> {
    let mut bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if let Some(f) = field {
        let mut v: serde_json::Value =
            serde_json::from_slice(&bytes).map_err(|e| schema_err("", e.to_string()))?;
        match v.as_object_mut() {
            Some(obj) => {
                obj.insert("field".into(), serde_json::Value::String(f.to_string()));
            }
            None => return Err(schema_err("", "top level is not an object")),
        }
        bytes = serde_json::to_vec(&v).map_err(|e| Error::Internal(e.to_string()))?;
    }
    let name = path.to_string_lossy();
    if name.ends_with(".quiver.json") {
        let q = parse_quiver_json(&bytes)?;
        q.cellular
            .ok_or_else(|| schema_err("cellular", "quiver file has no cellular section"))
    } else {
        parse_cell_json(&bytes)
    }
}

/// Named view of a table row, used by tests and reports.
pub fn product_by_names(alg: &Algebra, a: &str, b: &str) -> Option<BTreeMap<String, Scalar>> {
    let i = alg.position_by_name(a)?;
    let j = alg.position_by_name(b)?;
    Some(
        alg.mul_basis(i, j)
            .iter()
            .map(|(p, c)| (alg.name(*p).to_string(), c.clone()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_dims() {
        for n in 1..=5 {
            let a = matrix_algebra(n, Field::Rational).unwrap();
            assert_eq!(a.dim(), n * n);
            assert!(a.verify_cellular().is_ok());
        }
        let a = matrix_algebra(3, Field::Rational).unwrap();
        let names: Vec<&str> = a.unit().terms().iter().map(|(p, _)| a.name(*p)).collect();
        assert_eq!(names, ["E1,1", "E2,2", "E3,3"]);
    }

    #[test]
    fn matrix_alpha_table() {
        let d = matrix_alpha(4, 2, Field::Rational).unwrap();
        assert_eq!(d.alpha("1").unwrap(), "s");
        for k in ["2", "3", "4"] {
            assert_eq!(d.alpha(k).unwrap(), "l");
        }
        assert!(matrix_alpha(4, 1, Field::Rational).is_err());
        assert!(matrix_alpha(4, 5, Field::Rational).is_err());
    }

    #[test]
    fn path_example_basis() {
        let q = paper_quiver(Field::Rational).unwrap();
        let pa = build_path_algebra(&q, Some(3)).unwrap();
        assert_eq!(pa.dim(), 18);
        let w = q.path(&["a12", "a21", "a12"]).unwrap();
        assert!(pa.normal_form(&w).is_empty());
        assert!(matches!(
            build_path_algebra(&q, Some(2)),
            Err(Error::NotFiniteWithinCap { cap: 2 })
        ));
    }

    #[test]
    fn single_vertex() {
        let q = Quiver::new(Field::Rational, vec!["v".into()], vec![]).unwrap();
        assert_eq!(build_path_algebra(&q, None).unwrap().dim(), 1);
    }

    #[test]
    fn path_example_products() {
        let (a, _) = build_paper_quiver_example(Field::Rational).unwrap();
        assert_eq!(a.dim(), 18);
        assert_eq!(product_by_names(&a, "a12", "a23").unwrap().len(), 0);
        let p = product_by_names(&a, "a23", "a32").unwrap();
        assert_eq!(p.len(), 1);
        assert!(p["a21a12"].is_one());
        let e = product_by_names(&a, "e3", "e3").unwrap();
        assert!(e["e3"].is_one());
        assert!(a.verify_cellular().is_ok());
    }

    #[test]
    fn builtin_names() {
        assert_eq!("path-example".parse::<Builtin>().unwrap(), Builtin::PathExample);
        assert_eq!(
            "matrix:n=4,b=2".parse::<Builtin>().unwrap(),
            Builtin::Matrix { n: 4, b: Some(2) }
        );
        assert!("matrix:n=4,b=1".parse::<Builtin>().is_err());
        assert!("matrix:b=2".parse::<Builtin>().is_err());
    }

    #[test]
    fn cell_json_round_trip() {
        for b in ["path-example", "matrix:n=3,b=2", "matrix:n=2"] {
            let (a, d) = b.parse::<Builtin>().unwrap().build(Field::Rational).unwrap();
            let text = serialize_cell_json(&a, d.as_ref());
            let (a2, d2) = parse_cell_json(text.as_bytes()).unwrap();
            assert_eq!(a2, a);
            assert_eq!(d2, d);
            assert_eq!(serialize_cell_json(&a2, d2.as_ref()), text);
        }
    }

    #[test]
    fn quiver_json_matches_builtin() {
        let text = serde_json::to_string(&paper_quiver_file()).unwrap();
        let q = parse_quiver_json(text.as_bytes()).unwrap();
        let (a, d) = q.cellular.unwrap();
        let (b, e) = build_paper_quiver_example(Field::Rational).unwrap();
        assert_eq!(a, b);
        assert_eq!(d.unwrap(), e);
    }

    #[test]
    fn relation_order_is_irrelevant() {
        let mut q = paper_quiver(Field::Rational).unwrap();
        let a = build_path_algebra(&q, None).unwrap();
        q.relations.reverse();
        let b = build_path_algebra(&q, None).unwrap();
        assert_eq!(a.monomials, b.monomials);
        assert_eq!(a.table, b.table);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let (a, _) = Builtin::Matrix { n: 2, b: None }.build(Field::Rational).unwrap();
        let mut f = to_file(&a, None);
        f.lambda_plus.labels.clear();
        let text = serde_json::to_string(&f).unwrap();
        match parse_cell_json(text.as_bytes()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "lambda_plus.labels"),
            other => panic!("{other:?}"),
        }
        let bad = br#"{"schema":1,"field":"rational","lambda_plus":{"labels":["x"]},"cells":[{"label":"x","indices":"1"}],"unit":[],"products":[]}"#;
        match parse_cell_json(bad) {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("cells[0]"), "{path}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_order_is_rejected() {
        let (a, _) = Builtin::Matrix { n: 2, b: None }.build(Field::Rational).unwrap();
        let mut f = to_file(&a, None);
        f.lambda_plus.labels.push("y".into());
        f.lambda_plus.covers = vec![("2".into(), "y".into()), ("y".into(), "2".into())];
        let text = serde_json::to_string(&f).unwrap();
        assert!(matches!(parse_cell_json(text.as_bytes()), Err(Error::Poset(_))));
    }
}
