//! Radicals, composition multiplicities, decomposition matrices and linkage
//! classes for finite-dimensional algebras given by a multiplication table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Algebra, Poset};
use crate::error::{Error, Result};
use crate::linalg::{unit_vec, zero_vec, ExactMatrix, Field, Scalar, Span};
use crate::module::{pairing, simple_module_at, standard_module_at, CellModule, Side};

/// The Jacobson radical as a subspace of the algebra.
#[derive(Clone, Debug)]
pub struct Radical {
    pub span: Span,
    /// Least `k` with `J^k = 0`.
    pub nilpotency: usize,
}

impl Radical {
    pub fn dim(&self) -> usize {
        self.span.dim()
    }
}

/// Fails unless the trace form detects the radical over `field`.
pub fn require_characteristic(field: Field, dim: usize) -> Result<()> {
    match field {
        Field::Rational => Ok(()),
        Field::Prime(p) if p as usize > dim => Ok(()),
        Field::Prime(p) => Err(Error::CharacteristicTooSmall { p, dim }),
    }
}

/// Kernel of `(a, b) -> tr(L_{ab})` on the left regular representation,
/// checked to be a nilpotent two-sided ideal.
pub fn jacobson_radical(alg: &Algebra) -> Result<Radical> {
    let f = alg.field();
    let n = alg.dim();
    require_characteristic(f, n)?;
    let traces: Vec<Scalar> = (0..n).map(|k| alg.left_mult_matrix(k).trace()).collect();
    let rows: Vec<Vec<Scalar>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = f.zero();
                    for (k, c) in alg.mul_basis(i, j) {
                        s = &s + &(c * &traces[k.to_owned()]);
                    }
                    s
                })
                .collect()
        })
        .collect();
    let form = ExactMatrix::from_rows(f, n, rows)?;
    let span = Span::from_vectors(f, n, form.nullspace());
    for v in span.basis() {
        for i in 0..n {
            let e = unit_vec(f, n, i);
            if !span.contains(&alg.mul_dense(v, &e)) || !span.contains(&alg.mul_dense(&e, v)) {
                return Err(Error::Internal(format!(
                    "trace-form kernel is not an ideal at {}",
                    alg.name(i)
                )));
            }
        }
    }
    let mut power = span.clone();
    let mut nilpotency = 1;
    while power.dim() > 0 {
        if nilpotency > n {
            return Err(Error::Internal("trace-form kernel is not nilpotent".into()));
        }
        let mut next = Span::new(f, n);
        for x in power.basis() {
            for y in span.basis() {
                next.insert(alg.mul_dense(x, y));
            }
        }
        power = next;
        nilpotency += 1;
    }
    Ok(Radical { span, nilpotency })
}

/// The regular module on the given side, with the basis names as labels.
pub fn regular_module(alg: &Algebra, side: Side) -> Result<CellModule> {
    let action = (0..alg.dim())
        .map(|p| match side {
            Side::Right => alg.right_mult_matrix(p),
            Side::Left => alg.left_mult_matrix(p),
        })
        .collect();
    CellModule::new("regular".into(), side, alg.names().to_vec(), alg.field(), action)
}

/// Matrices by which the radical basis acts on `m`.
fn radical_actions(m: &CellModule, j: &Radical) -> Vec<ExactMatrix> {
    j.span
        .basis()
        .iter()
        .map(|v| {
            let terms: Vec<(usize, Scalar)> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
            m.element_action(&terms)
        })
        .collect()
}

/// `M ⊃ MJ ⊃ MJ² ⊃ …`, without the final zero. Empty for the zero module.
pub fn radical_filtration(m: &CellModule, j: &Radical) -> Result<Vec<Span>> {
    let f = m.field();
    let acts = radical_actions(m, j);
    let mut out = Vec::new();
    let mut cur = Span::whole(f, m.dim());
    while cur.dim() > 0 {
        let mut next = Span::new(f, m.dim());
        for v in cur.basis() {
            for a in &acts {
                next.insert(a.vec_mul(v)?);
            }
        }
        if next.dim() >= cur.dim() {
            return Err(Error::Internal(format!("radical does not act nilpotently on {}", m.label)));
        }
        out.push(cur);
        cur = next;
    }
    Ok(out)
}

/// Dimension of the space of module maps `m -> n`.
pub fn hom_dimension(m: &CellModule, n: &CellModule) -> Result<usize> {
    if m.side != n.side {
        return Err(Error::SideMismatch(format!(
            "{} is a {} module and {} a {} module",
            m.label, m.side, n.label, n.side
        )));
    }
    if m.algebra_dim() != n.algebra_dim() {
        return Err(Error::DimensionMismatch("modules over different algebras".into()));
    }
    let (dm, dn) = (m.dim(), n.dim());
    let vars = dm * dn;
    if vars == 0 {
        return Ok(0);
    }
    let f = m.field();
    let mut eqs = Span::new(f, vars);
    'outer: for p in 0..m.algebra_dim() {
        let (rm, rn) = (m.action(p), n.action(p));
        for i in 0..dm {
            for jj in 0..dn {
                let mut row = zero_vec(f, vars);
                for k in 0..dm {
                    let c = rm.get(i, k);
                    if !c.is_zero() {
                        row[k * dn + jj] = &row[k * dn + jj] + c;
                    }
                }
                for k in 0..dn {
                    let c = rn.get(k, jj);
                    if !c.is_zero() {
                        row[i * dn + k] = &row[i * dn + k] - c;
                    }
                }
                eqs.insert(row);
                if eqs.is_full() {
                    break 'outer;
                }
            }
        }
    }
    Ok(vars - eqs.dim())
}

/// Simple modules of a cell datum on one side, with the radical used to
/// split modules into semisimple layers.
pub struct RepEngine<'a> {
    alg: &'a Algebra,
    side: Side,
    radical: Radical,
    labels: Vec<String>,
    simples: Vec<CellModule>,
}

impl<'a> RepEngine<'a> {
    pub fn new(alg: &'a Algebra, side: Side) -> Result<Self> {
        let radical = jacobson_radical(alg)?;
        Self::with_radical(alg, side, radical)
    }

    /// Builds the simples (cells with a nonzero form) and checks they are
    /// absolutely irreducible and pairwise non-isomorphic.
    pub fn with_radical(alg: &'a Algebra, side: Side, radical: Radical) -> Result<Self> {
        let cells: Vec<usize> = (0..alg.datum().cells().len())
            .filter_map(|ci| match pairing(alg, ci) {
                Ok(b) if b.is_zero() => None,
                Ok(_) => Some(Ok(ci)),
                Err(e) => Some(Err(e)),
            })
            .collect::<Result<_>>()?;
        let simples: Vec<CellModule> = cells
            .par_iter()
            .map(|&ci| simple_module_at(alg, ci, side))
            .collect::<Result<_>>()?;
        let labels: Vec<String> = cells
            .iter()
            .map(|&ci| alg.datum().cell(ci).label.clone())
            .collect();
        for (i, l) in simples.iter().enumerate() {
            for (j, k) in simples.iter().enumerate() {
                let h = hom_dimension(l, k)?;
                let want = usize::from(i == j);
                if h != want {
                    return Err(Error::NonSplit(
                        format!("Hom({}, {}) on the {side}", labels[i], labels[j]),
                        h,
                    ));
                }
            }
        }
        Ok(RepEngine {
            alg,
            side,
            radical,
            labels,
            simples,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        self.alg
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn radical(&self) -> &Radical {
        &self.radical
    }

    /// Labels of the simple modules, in cell order.
    pub fn simple_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn simples(&self) -> &[CellModule] {
        &self.simples
    }

    pub fn simple(&self, label: &str) -> Option<&CellModule> {
        self.labels.iter().position(|l| l == label).map(|i| &self.simples[i])
    }

    /// Multiplicity of each simple in `m`, aligned with
    /// [`simple_labels`](Self::simple_labels). The dimensions are checked to
    /// add up.
    pub fn multiplicities(&self, m: &CellModule) -> Result<Vec<usize>> {
        if m.side != self.side {
            return Err(Error::SideMismatch(format!(
                "{} module {} given to the {} engine",
                m.side, m.label, self.side
            )));
        }
        let layers = radical_filtration(m, &self.radical)?;
        let mut mult = vec![0; self.simples.len()];
        for (k, upper) in layers.iter().enumerate() {
            let lower = match layers.get(k + 1) {
                Some(s) => s.clone(),
                None => Span::new(m.field(), m.dim()),
            };
            let layer = m.subquotient(upper, &lower, format!("{} layer {k}", m.label))?;
            for (i, l) in self.simples.iter().enumerate() {
                mult[i] += hom_dimension(&layer, l)?;
            }
        }
        let total: usize = mult.iter().zip(&self.simples).map(|(c, l)| c * l.dim()).sum();
        if total != m.dim() {
            return Err(Error::Composition(format!(
                "factors of {} account for dimension {total} of {}",
                m.label,
                m.dim()
            )));
        }
        Ok(mult)
    }

    /// Labelled multiplicities, zero entries omitted.
    pub fn composition_factors(&self, m: &CellModule) -> Result<BTreeMap<String, usize>> {
        Ok(self
            .multiplicities(m)?
            .into_iter()
            .zip(&self.labels)
            .filter(|(c, _)| *c > 0)
            .map(|(c, l)| (l.clone(), c))
            .collect())
    }

    /// Rows: every standard module. Columns: the simples.
    pub fn decomposition_matrix(&self) -> Result<DecompositionMatrix> {
        let cells = self.alg.datum().cells();
        let entries = (0..cells.len())
            .into_par_iter()
            .map(|ci| {
                let w = standard_module_at(self.alg, ci, self.side)?;
                self.multiplicities(&w)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DecompositionMatrix {
            side: self.side,
            row_labels: cells.iter().map(|c| c.label.clone()).collect(),
            col_labels: self.labels.clone(),
            entries,
        })
    }
}

/// Decomposition matrix of `alg` on one side.
pub fn decomposition_matrix(alg: &Algebra, side: Side) -> Result<DecompositionMatrix> {
    RepEngine::new(alg, side)?.decomposition_matrix()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionMatrix {
    pub side: Side,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<usize>>,
}

impl Serialize for Side {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl DecompositionMatrix {
    pub fn get(&self, row: &str, col: &str) -> Option<usize> {
        let r = self.row_labels.iter().position(|l| l == row)?;
        let c = self.col_labels.iter().position(|l| l == col)?;
        Some(self.entries[r][c])
    }

    /// Entry with the convention that unknown rows or columns are zero.
    pub fn entry(&self, row: &str, col: &str) -> usize {
        self.get(row, col).unwrap_or(0)
    }

    /// Same labels and entries, ignoring the side.
    pub fn same_numbers(&self, other: &DecompositionMatrix) -> bool {
        self.row_labels == other.row_labels
            && self.col_labels == other.col_labels
            && self.entries == other.entries
    }

    /// Checks `d(λ,λ) = 1` on the columns and `d(λ,μ) ≠ 0 ⇒ λ ≥ μ`. Returns
    /// the first offending pair.
    pub fn unitriangular_witness(&self, order: &Poset) -> Option<(String, String)> {
        for (r, rl) in self.row_labels.iter().enumerate() {
            for (c, cl) in self.col_labels.iter().enumerate() {
                let d = self.entries[r][c];
                let bad = if rl == cl { d != 1 } else { d != 0 && !order.ge_label(rl, cl) };
                if bad {
                    return Some((rl.clone(), cl.clone()));
                }
            }
        }
        None
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{}", csv_field(""));
        for c in &self.col_labels {
            let _ = write!(s, ",{}", csv_field(c));
        }
        s.push('\n');
        for (r, row) in self.row_labels.iter().zip(&self.entries) {
            s.push_str(&csv_field(r));
            for x in row {
                let _ = write!(s, ",{x}");
            }
            s.push('\n');
        }
        s
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let w0 = self.row_labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let widths: Vec<usize> = self.col_labels.iter().map(|l| l.chars().count().max(1)).collect();
        let pad = |s: &str, w: usize| format!("{}{}", s, " ".repeat(w.saturating_sub(s.chars().count())));
        let mut s = pad("", w0);
        for (c, w) in self.col_labels.iter().zip(&widths) {
            s.push_str("  ");
            s.push_str(&pad(c, *w));
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
        for (r, row) in self.row_labels.iter().zip(&self.entries) {
            s.push_str(&pad(r, w0));
            for (x, w) in row.iter().zip(&widths) {
                s.push_str("  ");
                s.push_str(&pad(&x.to_string(), *w));
            }
            s.truncate(s.trim_end().len());
            s.push('\n');
        }
        s
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Classes of row labels, joined when two rows share a nonzero column.
/// Classes are listed by their first row; members keep row order.
pub fn linkage_partition(d: &DecompositionMatrix) -> Vec<Vec<String>> {
    let n = d.row_labels.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for c in 0..d.col_labels.len() {
        let rows: Vec<usize> = (0..n).filter(|&r| d.entries[r][c] != 0).collect();
        for w in rows.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for r in 0..n {
        let root = find(&mut parent, r);
        classes.entry(root).or_default().push(d.row_labels[r].clone());
    }
    classes.into_values().collect()
}

/// Square matrix indexed by simple labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<usize>>,
}

impl CartanMatrix {
    pub fn get(&self, x: &str, y: &str) -> Option<usize> {
        let i = self.labels.iter().position(|l| l == x)?;
        let j = self.labels.iter().position(|l| l == y)?;
        Some(self.entries[i][j])
    }
}

/// `C(x, y) = Σ_row left(row, x)·right(row, y)`.
pub fn cartan_via_formula(left: &DecompositionMatrix, right: &DecompositionMatrix) -> Result<CartanMatrix> {
    if left.row_labels != right.row_labels || left.col_labels != right.col_labels {
        return Err(Error::LabelMismatch(format!(
            "left matrix has rows {:?} and columns {:?}, right matrix rows {:?} and columns {:?}",
            left.row_labels, left.col_labels, right.row_labels, right.col_labels
        )));
    }
    let k = left.col_labels.len();
    let mut entries = vec![vec![0; k]; k];
    for (lr, rr) in left.entries.iter().zip(&right.entries) {
        for x in 0..k {
            for y in 0..k {
                entries[x][y] += lr[x] * rr[y];
            }
        }
    }
    Ok(CartanMatrix {
        labels: left.col_labels.clone(),
        entries,
    })
}

/// Centre of the algebra.
pub fn centre(alg: &Algebra) -> Span {
    let f = alg.field();
    let n = alg.dim();
    // z ∈ Z  iff  Σ_k z_k (c_k c_i − c_i c_k) = 0 for all i
    let rows: Vec<Vec<Scalar>> = (0..n)
        .map(|k| {
            let mut row = Vec::with_capacity(n * n);
            for i in 0..n {
                let mut v = zero_vec(f, n);
                for (p, c) in alg.mul_basis(k, i) {
                    v[*p] = &v[*p] + c;
                }
                for (p, c) in alg.mul_basis(i, k) {
                    v[*p] = &v[*p] - c;
                }
                row.extend(v);
            }
            row
        })
        .collect();
    let m = ExactMatrix::from_rows(f, n * n, rows).expect("rectangular");
    Span::from_vectors(f, n, m.transpose().nullspace())
}

/// Number of blocks of a split algebra: `dim Z − dim(Z ∩ J)`.
pub fn block_count(alg: &Algebra, radical: &Radical) -> usize {
    let z = centre(alg);
    z.dim() - z.intersect(&radical.span).dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_paper_quiver_example, lam, matrix_algebra};
    use crate::module::{simple_module, standard_module};

    fn path() -> Algebra {
        build_paper_quiver_example(Field::Rational).unwrap().0
    }

    fn paper_matrix() -> Vec<Vec<usize>> {
        vec![
            vec![1, 0, 0, 0, 0],
            vec![1, 1, 0, 0, 0],
            vec![0, 1, 1, 0, 0],
            vec![0, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 1],
        ]
    }

    #[test]
    fn radicals() {
        let m = matrix_algebra(3, Field::Rational).unwrap();
        assert_eq!(jacobson_radical(&m).unwrap().dim(), 0);
        let a = path();
        let j = jacobson_radical(&a).unwrap();
        assert_eq!(j.dim(), 13);
        assert!(j.nilpotency >= 2);
        let a2 = a.change_field(Field::Prime(2)).unwrap();
        assert!(matches!(
            jacobson_radical(&a2),
            Err(Error::CharacteristicTooSmall { p: 2, dim: 18 })
        ));
    }

    #[test]
    fn filtrations() {
        let a = path();
        let j = jacobson_radical(&a).unwrap();
        let l = simple_module(&a, &lam(1), Side::Right).unwrap();
        assert_eq!(radical_filtration(&l, &j).unwrap().len(), 1);
        let w = standard_module(&a, &lam(1), Side::Right).unwrap();
        let dims: Vec<usize> = radical_filtration(&w, &j).unwrap().iter().map(Span::dim).collect();
        assert_eq!(dims, [2, 1]);
        let zero = simple_module(&a, &lam(0), Side::Right).unwrap();
        assert_eq!(zero.dim(), 0);
        assert!(radical_filtration(&zero, &j).unwrap().is_empty());
    }

    #[test]
    fn homs() {
        let a = path();
        let l1 = simple_module(&a, &lam(1), Side::Right).unwrap();
        let l2 = simple_module(&a, &lam(2), Side::Right).unwrap();
        let w1 = standard_module(&a, &lam(1), Side::Right).unwrap();
        assert_eq!(hom_dimension(&l1, &l1).unwrap(), 1);
        assert_eq!(hom_dimension(&l1, &l2).unwrap(), 0);
        assert_eq!(hom_dimension(&w1, &l2).unwrap(), 0);
        assert_eq!(hom_dimension(&w1, &l1).unwrap(), 1);
        let left = simple_module(&a, &lam(1), Side::Left).unwrap();
        assert!(matches!(hom_dimension(&l1, &left), Err(Error::SideMismatch(_))));
    }

    #[test]
    fn composition_factors() {
        let a = path();
        let e = RepEngine::new(&a, Side::Right).unwrap();
        let w3 = standard_module(&a, &lam(3), Side::Right).unwrap();
        let got = e.composition_factors(&w3).unwrap();
        assert_eq!(got, BTreeMap::from([(lam(3), 1), (lam(4), 1)]));
        let zero = simple_module(&a, &lam(0), Side::Right).unwrap();
        assert!(e.composition_factors(&zero).unwrap().is_empty());
        let m = matrix_algebra(3, Field::Rational).unwrap();
        let e = RepEngine::new(&m, Side::Right).unwrap();
        let w = standard_module(&m, "3", Side::Right).unwrap();
        assert_eq!(e.composition_factors(&w).unwrap(), BTreeMap::from([("3".to_string(), 1)]));
    }

    #[test]
    fn path_decomposition_matrix() {
        let a = path();
        for side in [Side::Right, Side::Left] {
            let d = decomposition_matrix(&a, side).unwrap();
            assert_eq!(d.row_labels, (0..=5).map(lam).collect::<Vec<_>>());
            assert_eq!(d.col_labels, (1..=5).map(lam).collect::<Vec<_>>());
            assert_eq!(d.entries, paper_matrix());
            assert!(d.unitriangular_witness(a.datum().poset()).is_none());
        }
        let a23 = a.change_field(Field::Prime(23)).unwrap();
        assert_eq!(decomposition_matrix(&a23, Side::Right).unwrap().entries, paper_matrix());
    }

    #[test]
    fn matrix_algebra_is_semisimple() {
        for n in 1..=4 {
            let m = matrix_algebra(n, Field::Rational).unwrap();
            let d = decomposition_matrix(&m, Side::Right).unwrap();
            assert_eq!(d.entries, vec![vec![1]]);
            let j = jacobson_radical(&m).unwrap();
            assert_eq!(block_count(&m, &j), 1);
        }
    }

    #[test]
    fn linkage() {
        let a = path();
        let d = decomposition_matrix(&a, Side::Right).unwrap();
        assert_eq!(linkage_partition(&d), vec![(0..=5).map(lam).collect::<Vec<_>>()]);
        let diag = DecompositionMatrix {
            side: Side::Right,
            row_labels: vec!["a".into(), "b".into()],
            col_labels: vec!["a".into(), "b".into()],
            entries: vec![vec![1, 0], vec![0, 1]],
        };
        assert_eq!(linkage_partition(&diag).len(), 2);
        assert_eq!(block_count(&a, &jacobson_radical(&a).unwrap()), 1);
    }

    #[test]
    fn cartan() {
        let id = DecompositionMatrix {
            side: Side::Right,
            row_labels: vec!["a".into(), "b".into()],
            col_labels: vec!["a".into(), "b".into()],
            entries: vec![vec![1, 0], vec![0, 1]],
        };
        assert_eq!(cartan_via_formula(&id, &id).unwrap().entries, id.entries);
        let mut zero = id.clone();
        zero.entries = vec![vec![0, 0], vec![0, 0]];
        assert_eq!(cartan_via_formula(&zero, &id).unwrap().entries, zero.entries);
        let mut other = id.clone();
        other.col_labels = vec!["a".into(), "c".into()];
        assert!(matches!(cartan_via_formula(&id, &other), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn regular_module_matches_cartan() {
        let a = path();
        let e = RepEngine::new(&a, Side::Right).unwrap();
        let reg = regular_module(&a, Side::Right).unwrap();
        assert!(reg.representation_witness(&a).is_none());
        let got = e.multiplicities(&reg).unwrap();
        let dl = decomposition_matrix(&a, Side::Left).unwrap();
        let dr = e.decomposition_matrix().unwrap();
        let c = cartan_via_formula(&dl, &dr).unwrap();
        let dims: Vec<usize> = e.simples().iter().map(CellModule::dim).collect();
        for (y, g) in got.iter().enumerate() {
            let want: usize = (0..dims.len()).map(|x| dims[x] * c.entries[x][y]).sum();
            assert_eq!(*g, want);
        }
    }

    #[test]
    fn csv_export() {
        let a = path();
        let d = decomposition_matrix(&a, Side::Right).unwrap();
        let csv = d.to_csv();
        assert!(csv.starts_with(",λ1,λ2,λ3,λ4,λ5\nλ0,1,0,0,0,0\n"));
    }
}
