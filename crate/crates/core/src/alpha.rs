//! The idempotent datum and order-compatible map that drive the Levi,
//! parabolic and quotient constructions.

use std::collections::BTreeSet;

use crate::algebra::{Algebra, AlgebraElement, CellDatum, Poset, Table};
use crate::error::{Error, Result};
use crate::linalg::{unit_vec, Scalar, Span};
use crate::report::{labels, Report};

/// Idempotents `e_μ` (μ in Λ ⊆ Λ̃), a poset X and a map `α: Λ̃ -> X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaDatum {
    pub lambda_tilde: Poset,
    pub lambda: Vec<String>,
    pub idempotents: Vec<AlgebraElement>,
    pub x: Poset,
    // alpha[i] is the X index of lambda_tilde element i
    alpha: Vec<usize>,
}

impl AlphaDatum {
    /// Structural checks only; the algebraic conditions are reported by
    /// [`verify_assumptions`].
    pub fn new(
        lambda_tilde: Poset,
        lambda: Vec<String>,
        idempotents: Vec<AlgebraElement>,
        x: Poset,
        map: &[(String, String)],
    ) -> Result<AlphaDatum> {
        if lambda.len() != idempotents.len() {
            return Err(Error::InvalidAlpha(format!(
                "{} idempotents for {} labels",
                idempotents.len(),
                lambda.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &lambda {
            lambda_tilde.require(l)?;
            if !seen.insert(l) {
                return Err(Error::InvalidAlpha(format!("{l} listed twice in Λ")));
            }
        }
        let mut alpha = vec![usize::MAX; lambda_tilde.len()];
        for (a, b) in map {
            let i = lambda_tilde.require(a)?;
            let j = x.require(b)?;
            if alpha[i] != usize::MAX {
                return Err(Error::InvalidAlpha(format!("α({a}) given twice")));
            }
            alpha[i] = j;
        }
        if let Some(i) = alpha.iter().position(|&j| j == usize::MAX) {
            return Err(Error::InvalidAlpha(format!(
                "α({}) is not given",
                lambda_tilde.label(i)
            )));
        }
        Ok(AlphaDatum {
            lambda_tilde,
            lambda,
            idempotents,
            x,
            alpha,
        })
    }

    /// `α(label)` as a label of X.
    pub fn alpha(&self, label: &str) -> Result<&str> {
        Ok(self.x.label(self.alpha_index(label)?))
    }

    /// `α(label)` as an index of X.
    pub fn alpha_index(&self, label: &str) -> Result<usize> {
        let i = self.lambda_tilde.require(label)?;
        Ok(self.alpha[i])
    }

    /// The map as `(Λ̃ label, X label)` pairs in Λ̃ order.
    pub fn map_pairs(&self) -> Vec<(String, String)> {
        self.alpha
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.lambda_tilde.label(i).to_string(), self.x.label(j).to_string()))
            .collect()
    }

    pub fn idempotent(&self, mu: &str) -> Option<&AlgebraElement> {
        self.lambda.iter().position(|l| l == mu).map(|i| &self.idempotents[i])
    }

    /// Same datum with every idempotent coefficient moved to `alg`'s field.
    pub fn over_field_of(&self, alg: &Algebra) -> Result<AlphaDatum> {
        let f = alg.field();
        let idempotents = self
            .idempotents
            .iter()
            .map(|e| {
                let terms: Result<Vec<_>> = e
                    .terms()
                    .iter()
                    .map(|(p, c)| match c {
                        Scalar::Q(q) => Ok((*p, f.from_rational(q)?)),
                        _ if c.field() == f => Ok((*p, c.clone())),
                        _ => Err(Error::FieldMismatch {
                            expected: f,
                            found: c.field(),
                        }),
                    })
                    .collect();
                terms.map(AlgebraElement::from_terms)
            })
            .collect::<Result<_>>()?;
        Ok(AlphaDatum {
            idempotents,
            ..self.clone()
        })
    }
}

/// `(λ,ε)` as a label.
pub fn omega_label(lambda: &str, eps: u8) -> String {
    format!("({lambda},{eps})")
}

fn fixes_on_right(alg: &Algebra, pos: usize, e: &AlgebraElement) -> bool {
    let f = alg.field();
    alg.mul_sparse(&[(pos, f.one())], e.terms()) == unit_vec(f, alg.dim(), pos)
}

fn fixes_on_left(alg: &Algebra, pos: usize, e: &AlgebraElement) -> bool {
    let f = alg.field();
    alg.mul_sparse(e.terms(), &[(pos, f.one())]) == unit_vec(f, alg.dim(), pos)
}

/// How one cell's index set splits: the idempotent fixing each index and the
/// resulting `T⁺`/`T⁻` parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSplit {
    pub label: String,
    pub t: Vec<String>,
    /// `mu[i]` indexes `AlphaDatum::lambda`
    pub mu: Vec<usize>,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl CellSplit {
    /// Indices of `I(λ,ε)`.
    pub fn part(&self, eps: u8) -> &[usize] {
        if eps == 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    pub fn part_labels(&self, eps: u8) -> Vec<String> {
        self.part(eps).iter().map(|&i| self.t[i].clone()).collect()
    }

    /// `T(λ,μ)` as labels.
    pub fn t_set(&self, ad: &AlphaDatum, mu: &str) -> Vec<String> {
        (0..self.t.len())
            .filter(|&i| ad.lambda[self.mu[i]] == mu)
            .map(|i| self.t[i].clone())
            .collect()
    }

    /// `ε` of index `i`.
    pub fn eps(&self, i: usize) -> u8 {
        u8::from(!self.plus.contains(&i))
    }
}

/// The splitting of every `T(λ)`, aligned with the cells of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauPartition {
    pub cells: Vec<CellSplit>,
}

impl TableauPartition {
    pub fn cell(&self, label: &str) -> Result<&CellSplit> {
        self.cells
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

/// The unique idempotent fixing each column (and row) of every cell, and the
/// split by `α`. Fails when an index is fixed by zero or several
/// idempotents, when rows and columns disagree, or when `α(μ)` is not below
/// `α(λ)`.
pub fn tableau_partition(alg: &Algebra, ad: &AlphaDatum) -> Result<TableauPartition> {
    if !alg.is_involutive() {
        return Err(Error::InvalidAlpha("the ambient algebra must be cellular".into()));
    }
    let mut cells = Vec::new();
    for cell in alg.datum().cells() {
        let n = cell.cols.len();
        let mut mu = Vec::with_capacity(n);
        for t in 0..n {
            let cols: Vec<usize> = (0..ad.lambda.len())
                .filter(|&m| (0..n).all(|s| fixes_on_right(alg, cell.position(s, t), &ad.idempotents[m])))
                .collect();
            let rows: Vec<usize> = (0..ad.lambda.len())
                .filter(|&m| (0..n).all(|s| fixes_on_left(alg, cell.position(t, s), &ad.idempotents[m])))
                .collect();
            if cols.len() != 1 {
                return Err(Error::InvalidAlpha(format!(
                    "index {} of cell {} is fixed on the right by {} idempotents",
                    cell.cols[t],
                    cell.label,
                    cols.len()
                )));
            }
            if rows != cols {
                return Err(Error::InvalidAlpha(format!(
                    "index {} of cell {} is fixed by different idempotents on the left and right",
                    cell.cols[t], cell.label
                )));
            }
            mu.push(cols[0]);
        }
        let al = ad.alpha_index(&cell.label).map_err(|_| {
            Error::InvalidAlpha(format!("cell {} is not an element of Λ̃", cell.label))
        })?;
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (t, &m) in mu.iter().enumerate() {
            let am = ad.alpha_index(&ad.lambda[m])?;
            if am == al {
                plus.push(t);
            } else if ad.x.gt(al, am) {
                minus.push(t);
            } else {
                return Err(Error::InvalidAlpha(format!(
                    "α({}) = {} is not above α({}) = {}",
                    cell.label,
                    ad.x.label(al),
                    ad.lambda[m],
                    ad.x.label(am)
                )));
            }
        }
        cells.push(CellSplit {
            label: cell.label.clone(),
            t: cell.cols.clone(),
            mu,
            plus,
            minus,
        });
    }
    Ok(TableauPartition { cells })
}

/// Ω with its order, the upper part Ω̂ (ε = 1) and Λ̄⁺.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega {
    pub poset: Poset,
    /// `(ambient cell index, ε)` for each element of `poset`, by index
    pub members: Vec<(usize, u8)>,
    pub hat: Vec<String>,
    pub bar_lambda: Vec<String>,
}

impl Omega {
    pub fn contains(&self, lambda: &str, eps: u8) -> bool {
        self.poset.index_of(&omega_label(lambda, eps)).is_some()
    }

    pub fn labels(&self) -> &[String] {
        self.poset.labels()
    }
}

/// Ω = {(λ,ε) : I(λ,ε) ≠ ∅} ordered by ε first, then by Λ⁺.
pub fn omega(alg: &Algebra, part: &TableauPartition) -> Result<Omega> {
    let lp = alg.datum().poset();
    let mut members = Vec::new();
    for (ci, split) in part.cells.iter().enumerate() {
        for eps in [0u8, 1] {
            if !split.part(eps).is_empty() {
                members.push((ci, eps));
            }
        }
    }
    let labels: Vec<String> = members
        .iter()
        .map(|&(ci, e)| omega_label(&part.cells[ci].label, e))
        .collect();
    let mut pairs = Vec::new();
    for (i, &(a, ea)) in members.iter().enumerate() {
        for (j, &(b, eb)) in members.iter().enumerate() {
            if ea > eb || (ea == eb && lp.gt(a, b)) {
                pairs.push((i, j));
            }
        }
    }
    let poset = Poset::from_indices(labels.clone(), &pairs)?;
    let hat = members
        .iter()
        .zip(&labels)
        .filter(|((_, e), _)| *e == 1)
        .map(|(_, l)| l.clone())
        .collect();
    let bar_lambda = members
        .iter()
        .filter(|(_, e)| *e == 0)
        .map(|&(ci, _)| part.cells[ci].label.clone())
        .collect();
    Ok(Omega {
        poset,
        members,
        hat,
        bar_lambda,
    })
}

/// Checks the datum against the algebra: the order on Λ̃, the idempotent
/// relations, the cell expansion and support of each `e_μ`, the unique
/// fixing idempotent of every index, monotonicity of `α`, the product
/// vanishing rule, the case rules for products inside the Levi and
/// parabolic spans, saturation of Ω̂ and `1 ∈ A^α`.
pub fn verify_assumptions(alg: &Algebra, ad: &AlphaDatum) -> Report {
    let mut r = Report::new();
    let f = alg.field();
    let datum = alg.datum();
    let lp = datum.poset();
    let lt = &ad.lambda_tilde;

    // order on Λ⁺ is induced from Λ̃
    let mut missing = Vec::new();
    for l in lp.labels() {
        if lt.index_of(l).is_none() {
            missing.push(l.clone());
        }
    }
    let mut broken = None;
    for i in 0..lp.len() {
        for j in 0..lp.len() {
            if lp.gt(i, j) && !lt.gt_label(lp.label(i), lp.label(j)) && broken.is_none() {
                broken = Some((lp.label(i).to_string(), lp.label(j).to_string()));
            }
        }
    }
    r.check_with(
        "ambient-order-extends",
        labels::<&str>(&[]),
        missing.is_empty() && broken.is_none(),
        || match (&missing[..], &broken) {
            ([first, ..], _) => format!("{first} is not an element of Λ̃"),
            (_, Some((a, b))) => format!("{a} > {b} in Λ⁺ but not in Λ̃"),
            _ => unreachable!(),
        },
    );

    let unit_ok = ad.idempotents.iter().all(|e| e.max_position().is_none_or(|p| p < alg.dim()));
    if !unit_ok {
        r.check_with("idempotent-nonzero", labels::<&str>(&[]), false, || {
            "an idempotent has a position outside the algebra".into()
        });
        return r;
    }

    for (m, e) in ad.lambda.iter().zip(&ad.idempotents) {
        r.check("idempotent-nonzero", labels(&[m]), !e.is_zero());
    }
    for (i, (m, e)) in ad.lambda.iter().zip(&ad.idempotents).enumerate() {
        for (j, (n, g)) in ad.lambda.iter().zip(&ad.idempotents).enumerate() {
            let prod = AlgebraElement::from_dense(&alg.mul_sparse(e.terms(), g.terms()));
            let want = if i == j { e.clone() } else { AlgebraElement::zero() };
            r.check_with("idempotent-orthogonal", labels(&[m, n]), prod == want, || {
                format!("product is {}", alg.describe(prod.terms()))
            });
        }
    }
    let sum = ad
        .idempotents
        .iter()
        .fold(AlgebraElement::zero(), |acc, e| acc.add(e));
    r.check_with("idempotent-sum-unit", labels::<&str>(&[]), &sum == alg.unit(), || {
        format!("sum is {}", alg.describe(sum.terms()))
    });

    for (m, e) in ad.lambda.iter().zip(&ad.idempotents) {
        let bad = e.terms().iter().find(|(p, _)| {
            let (ci, _, _) = datum.locate(*p);
            !lt.ge_label(&datum.cell(ci).label, m)
        });
        r.check_with("idempotent-cell-support", labels(&[m]), bad.is_none(), || {
            format!("term {} lies in a cell not above {m}", alg.name(bad.unwrap().0))
        });
    }

    // one fixing idempotent per index, the same on both sides
    let mut split_ok = true;
    for cell in datum.cells() {
        let n = cell.cols.len();
        if !cell.is_square() {
            split_ok = false;
            r.check("column-idempotent", labels(&[&cell.label]), false);
            continue;
        }
        for t in 0..n {
            let cols: Vec<&str> = ad
                .lambda
                .iter()
                .zip(&ad.idempotents)
                .filter(|(_, e)| (0..n).all(|s| fixes_on_right(alg, cell.position(s, t), e)))
                .map(|(m, _)| m.as_str())
                .collect();
            let rows: Vec<&str> = ad
                .lambda
                .iter()
                .zip(&ad.idempotents)
                .filter(|(_, e)| (0..n).all(|s| fixes_on_left(alg, cell.position(t, s), e)))
                .map(|(m, _)| m.as_str())
                .collect();
            let l = labels(&[&cell.label, &cell.cols[t]]);
            split_ok &= cols.len() == 1 && rows == cols;
            r.check_with("column-idempotent", l.clone(), cols.len() == 1, || {
                format!("fixed on the right by {cols:?}")
            });
            r.check_with("row-idempotent", l, rows == cols, || {
                format!("fixed on the left by {rows:?}, on the right by {cols:?}")
            });
        }
    }

    let mut monotone = None;
    for i in 0..lt.len() {
        for j in 0..lt.len() {
            if lt.gt(i, j) {
                let (a, b) = (ad.alpha[i], ad.alpha[j]);
                if a != b && !ad.x.gt(a, b) && monotone.is_none() {
                    monotone = Some((i, j));
                }
            }
        }
    }
    r.check_with("alpha-monotone", labels::<&str>(&[]), monotone.is_none(), || {
        let (i, j) = monotone.unwrap();
        format!(
            "{} > {} but α gives {} and {}",
            lt.label(i),
            lt.label(j),
            ad.x.label(ad.alpha[i]),
            ad.x.label(ad.alpha[j])
        )
    });

    if !split_ok || !missing.is_empty() {
        return r;
    }
    let part = match tableau_partition(alg, ad) {
        Ok(p) => p,
        Err(e) => {
            r.check_with("alpha-split", labels::<&str>(&[]), false, || e.to_string());
            return r;
        }
    };

    // support of e_μ inside T(λ,μ) × T(λ,μ)
    for (mi, (m, e)) in ad.lambda.iter().zip(&ad.idempotents).enumerate() {
        let bad = e.terms().iter().find(|(p, _)| {
            let (ci, s, t) = datum.locate(*p);
            part.cells[ci].mu[s] != mi || part.cells[ci].mu[t] != mi
        });
        r.check_with("idempotent-support-diagonal", labels(&[m]), bad.is_none(), || {
            format!("term {}", alg.name(bad.unwrap().0))
        });
    }

    for split in &part.cells {
        let bad = split
            .mu
            .iter()
            .find(|&&m| !lt.ge_label(&split.label, &ad.lambda[m]));
        r.check_with("partition-order", labels(&[&split.label]), bad.is_none(), || {
            format!("T({}, {}) is not empty", split.label, ad.lambda[*bad.unwrap()])
        });
    }

    r.outcome("product-vanishing", labels::<&str>(&[]), product_vanishing(alg, &part));

    let positions = |eps_of: &dyn Fn(usize, usize, usize) -> Option<u8>| -> Vec<Option<(usize, u8)>> {
        (0..alg.dim())
            .map(|p| {
                let (ci, s, t) = datum.locate(p);
                eps_of(ci, s, t).map(|e| (ci, e))
            })
            .collect()
    };
    let levi = positions(&|ci, s, t| {
        let c = &part.cells[ci];
        let (es, et) = (c.eps(s), c.eps(t));
        (es == et).then_some(es)
    });
    let parabolic = positions(&|ci, s, t| {
        let c = &part.cells[ci];
        match (c.eps(s), c.eps(t)) {
            (0, 0) => Some(0),
            (1, _) => Some(1),
            _ => None,
        }
    });
    r.outcome("levi-closure-cases", labels::<&str>(&[]), closure_cases(alg, &levi, false));
    r.outcome("parabolic-closure-cases", labels::<&str>(&[]), closure_cases(alg, &parabolic, true));

    let unit_out = alg.unit().terms().iter().find(|(p, _)| levi[*p].is_none());
    r.check_with("unit-in-levi", labels::<&str>(&[]), unit_out.is_none(), || {
        format!("unit has the term {}", alg.name(unit_out.unwrap().0))
    });

    match omega(alg, &part) {
        Ok(om) => {
            let hat: Vec<usize> = om.hat.iter().filter_map(|l| om.poset.index_of(l)).collect();
            let w = om.poset.saturation_witness(&hat);
            r.check_with("omega-hat-saturated", labels::<&str>(&[]), w.is_none(), || {
                let (a, b) = w.unwrap();
                format!("{} > {}", om.poset.label(a), om.poset.label(b))
            });
        }
        Err(e) => r.check_with("omega-hat-saturated", labels::<&str>(&[]), false, || e.to_string()),
    }
    let _ = f;
    r
}

/// `c^{λ1}_{s1 t1} c^{λ2}_{s2 t2}` vanishes unless `ν1 = μ2`, and otherwise
/// lies in cells above both factors with row idempotent `μ1` and column
/// idempotent `ν2`.
fn product_vanishing(alg: &Algebra, part: &TableauPartition) -> std::result::Result<(), String> {
    let datum = alg.datum();
    let lp = datum.poset();
    let f = alg.field();
    for i in 0..alg.dim() {
        let (c1, s1, t1) = datum.locate(i);
        let (mu1, nu1) = (part.cells[c1].mu[s1], part.cells[c1].mu[t1]);
        for j in 0..alg.dim() {
            let (c2, s2, t2) = datum.locate(j);
            let (mu2, nu2) = (part.cells[c2].mu[s2], part.cells[c2].mu[t2]);
            let prod = alg.mul_basis(i, j);
            if nu1 != mu2 {
                if !prod.is_empty() {
                    return Err(format!("{} * {} should vanish", alg.name(i), alg.name(j)));
                }
                continue;
            }
            for (q, c) in prod {
                let (ck, s, t) = datum.locate(*q);
                let ok = lp.ge(ck, c1)
                    && lp.ge(ck, c2)
                    && part.cells[ck].mu[s] == mu1
                    && part.cells[ck].mu[t] == nu2;
                if !ok && c != &f.zero() {
                    return Err(format!(
                        "{} * {} has the term {}",
                        alg.name(i),
                        alg.name(j),
                        alg.name(*q)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Support rules for products of two spanning elements. `zeta[p]` is the
/// `(cell, ε)` of position `p` when it belongs to the span. In the weak
/// form (the parabolic span) a right factor with `ε = 0` only forces the
/// cell to be at or above its own.
fn closure_cases(alg: &Algebra, zeta: &[Option<(usize, u8)>], weak: bool) -> std::result::Result<(), String> {
    let lp = alg.datum().poset();
    for i in 0..alg.dim() {
        let Some((l1, e1)) = zeta[i] else { continue };
        for j in 0..alg.dim() {
            let Some((l2, e2)) = zeta[j] else { continue };
            for (q, _) in alg.mul_basis(i, j) {
                let Some((l, e)) = zeta[*q] else {
                    return Err(format!(
                        "{} * {} has the term {} outside the span",
                        alg.name(i),
                        alg.name(j),
                        alg.name(*q)
                    ));
                };
                let left_ok = match e1 {
                    0 => (l == l1 && e == 0) || lp.gt(l, l1),
                    _ => e == 1 && lp.ge(l, l1),
                };
                let right_ok = match (e2, weak) {
                    (0, false) => (l == l2 && e == 0) || lp.gt(l, l2),
                    (0, true) => lp.ge(l, l2),
                    _ => e == 1 && lp.ge(l, l2),
                };
                if !left_ok || !right_ok {
                    return Err(format!(
                        "{} * {} has the term {} in the wrong place",
                        alg.name(i),
                        alg.name(j),
                        alg.name(*q)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// A subalgebra or subquotient built from positions of the ambient
/// algebra: basis element `p` here is basis element `embed[p]` there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubAlgebra {
    pub algebra: Algebra,
    pub embed: Vec<usize>,
}

impl SubAlgebra {
    pub fn positions(&self) -> BTreeSet<usize> {
        self.embed.iter().copied().collect()
    }

    /// Position here of ambient position `p`.
    pub fn locate_ambient(&self, p: usize) -> Option<usize> {
        self.embed.iter().position(|&q| q == p)
    }
}

/// One cell of a sub-datum, given by index lists into an ambient cell.
struct Piece {
    label: String,
    cell: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn project(terms: &[(usize, Scalar)], back: &[Option<usize>], dead: &[bool]) -> std::result::Result<Vec<(usize, Scalar)>, usize> {
    let mut out = Vec::with_capacity(terms.len());
    for (p, c) in terms {
        match back[*p] {
            Some(q) => out.push((q, c.clone())),
            None if dead[*p] => {}
            None => return Err(*p),
        }
    }
    Ok(out)
}

/// The span of the pieces, modulo the span of `killed`, with products taken
/// in `alg`. Closure and the ideal property of `killed` are checked.
fn build_sub(alg: &Algebra, poset: Poset, pieces: &[Piece], killed: &[usize], involutive: bool) -> Result<SubAlgebra> {
    let datum = alg.datum();
    let specs = pieces
        .iter()
        .map(|p| {
            let c = datum.cell(p.cell);
            (
                p.label.clone(),
                p.rows.iter().map(|&r| c.rows[r].clone()).collect(),
                p.cols.iter().map(|&k| c.cols[k].clone()).collect(),
            )
        })
        .collect();
    let sub = CellDatum::new(poset, specs)?;
    let mut embed = vec![0; sub.dim()];
    for p in pieces {
        let nc = sub.cell(sub.cell_index(&p.label)?);
        let c = datum.cell(p.cell);
        for (r, &pr) in p.rows.iter().enumerate() {
            for (k, &pk) in p.cols.iter().enumerate() {
                embed[nc.position(r, k)] = c.position(pr, pk);
            }
        }
    }
    let mut back = vec![None; alg.dim()];
    for (q, &p) in embed.iter().enumerate() {
        back[p] = Some(q);
    }
    let mut dead = vec![false; alg.dim()];
    for &k in killed {
        dead[k] = true;
    }
    let mut table = Table::new();
    for i in 0..embed.len() {
        for j in 0..embed.len() {
            let terms = project(alg.mul_basis(embed[i], embed[j]), &back, &dead).map_err(|q| {
                Error::Internal(format!(
                    "{} * {} has the term {} outside the span",
                    alg.name(embed[i]),
                    alg.name(embed[j]),
                    alg.name(q)
                ))
            })?;
            if !terms.is_empty() {
                table.insert((i, j), terms);
            }
        }
    }
    let everything: Vec<usize> = embed.iter().chain(killed).copied().collect();
    for &k in killed {
        for &p in &everything {
            for prod in [alg.mul_basis(k, p), alg.mul_basis(p, k)] {
                if let Some((q, _)) = prod.iter().find(|(q, _)| !dead[*q]) {
                    return Err(Error::Internal(format!(
                        "span of the removed cells is not an ideal: {} and {} give {}",
                        alg.name(k),
                        alg.name(p),
                        alg.name(*q)
                    )));
                }
            }
        }
    }
    let unit = project(alg.unit().terms(), &back, &dead)
        .map_err(|q| Error::Internal(format!("the unit has the term {} outside the span", alg.name(q))))?;
    let names = embed.iter().map(|&p| alg.name(p).to_string()).collect();
    let algebra = Algebra::new(
        alg.field(),
        sub,
        table,
        AlgebraElement::from_terms(unit),
        involutive,
        Some(names),
    )?;
    Ok(SubAlgebra { algebra, embed })
}

/// Everything built from `(A, datum)`.
#[derive(Clone, Debug)]
pub struct AlphaConstruction {
    pub partition: TableauPartition,
    pub omega: Omega,
    /// `A^α`, cellular over Ω
    pub levi: SubAlgebra,
    /// `Ã^α`, standardly based over Ω
    pub parabolic: SubAlgebra,
    /// `(Ã^α)*`
    pub co_parabolic: SubAlgebra,
    /// `Ā^α`, cellular over Λ̄⁺; `embed` lists the ambient positions of the
    /// surviving basis elements
    pub quotient: SubAlgebra,
    /// `levi_to_quotient[p]`: image in `Ā^α` of Levi basis element `p`
    pub levi_to_quotient: Vec<Option<usize>>,
    /// `levi_in_parabolic[p]`: position in `Ã^α` of Levi basis element `p`
    pub levi_in_parabolic: Vec<usize>,
}

fn all(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Builds `A^α`, `Ã^α`, `(Ã^α)*` and `Ā^α`. Run [`verify_assumptions`]
/// first; closure failures here are reported as internal errors.
pub fn construct(alg: &Algebra, ad: &AlphaDatum) -> Result<AlphaConstruction> {
    let partition = tableau_partition(alg, ad)?;
    let om = omega(alg, &partition)?;
    let datum = alg.datum();
    let n_of = |ci: usize| datum.cell(ci).cols.len();
    let piece = |ci: usize, eps: u8, rows: Vec<usize>, cols: Vec<usize>| Piece {
        label: omega_label(&partition.cells[ci].label, eps),
        cell: ci,
        rows,
        cols,
    };

    let levi_pieces: Vec<Piece> = om
        .members
        .iter()
        .map(|&(ci, e)| {
            let p = partition.cells[ci].part(e).to_vec();
            piece(ci, e, p.clone(), p)
        })
        .collect();
    let levi = build_sub(alg, om.poset.clone(), &levi_pieces, &[], true)?;

    let par_pieces: Vec<Piece> = om
        .members
        .iter()
        .map(|&(ci, e)| {
            let p = partition.cells[ci].part(e).to_vec();
            if e == 0 {
                piece(ci, e, p.clone(), p)
            } else {
                piece(ci, e, p, all(n_of(ci)))
            }
        })
        .collect();
    let parabolic = build_sub(alg, om.poset.clone(), &par_pieces, &[], false)?;

    let co_pieces: Vec<Piece> = om
        .members
        .iter()
        .map(|&(ci, e)| {
            let p = partition.cells[ci].part(e).to_vec();
            if e == 0 {
                piece(ci, e, p.clone(), p)
            } else {
                piece(ci, e, all(n_of(ci)), p)
            }
        })
        .collect();
    let co_parabolic = build_sub(alg, om.poset.clone(), &co_pieces, &[], false)?;

    let bar_idx: Vec<usize> = om
        .members
        .iter()
        .filter(|(_, e)| *e == 0)
        .map(|&(ci, _)| ci)
        .collect();
    let bar_poset = datum.poset().restrict(&bar_idx);
    let bar_pieces: Vec<Piece> = bar_idx
        .iter()
        .map(|&ci| {
            let p = partition.cells[ci].plus.clone();
            Piece {
                label: partition.cells[ci].label.clone(),
                cell: ci,
                rows: p.clone(),
                cols: p,
            }
        })
        .collect();
    let killed: Vec<usize> = minus_cells(alg, &partition, false);
    let quotient = build_sub(alg, bar_poset, &bar_pieces, &killed, true)?;

    let levi_to_quotient = levi
        .embed
        .iter()
        .map(|&p| quotient.locate_ambient(p))
        .collect();
    let levi_in_parabolic = levi
        .embed
        .iter()
        .map(|&p| {
            parabolic
                .locate_ambient(p)
                .ok_or_else(|| Error::Internal(format!("{} is in A^α but not in Ã^α", alg.name(p))))
        })
        .collect::<Result<_>>()?;

    Ok(AlphaConstruction {
        partition,
        omega: om,
        levi,
        parabolic,
        co_parabolic,
        quotient,
        levi_to_quotient,
        levi_in_parabolic,
    })
}

/// Ambient positions of the `ε = 1` cells: `T⁻ × T⁻` for the Levi span,
/// `T⁻ × T` for the parabolic one.
fn minus_cells(alg: &Algebra, part: &TableauPartition, parabolic: bool) -> Vec<usize> {
    let mut out = Vec::new();
    for (ci, split) in part.cells.iter().enumerate() {
        let cell = alg.datum().cell(ci);
        for &r in &split.minus {
            let cols: Vec<usize> = if parabolic { all(split.t.len()) } else { split.minus.clone() };
            for c in cols {
                out.push(cell.position(r, c));
            }
        }
    }
    out
}

impl AlphaConstruction {
    /// Structural checks on the constructed algebras: the axioms of each,
    /// the intersection and product identities between `Ã^α` and its image
    /// under the involution, and the two descriptions of `Ā^α`.
    pub fn structure_report(&self, alg: &Algebra) -> Result<Report> {
        let mut r = Report::new();
        let none = || labels::<&str>(&[]);
        for (id, sub) in [
            ("levi-cellular", &self.levi),
            ("parabolic-standard-basis", &self.parabolic),
            ("co-parabolic-standard-basis", &self.co_parabolic),
            ("quotient-cellular", &self.quotient),
        ] {
            let rep = sub.algebra.verify_cellular();
            r.check_with(id, none(), rep.is_ok(), || rep.violations[0].to_string());
        }

        let levi = self.levi.positions();
        let par = self.parabolic.positions();
        let co = self.co_parabolic.positions();
        r.check("parabolic-contains-levi", none(), levi.is_subset(&par));
        let meet: BTreeSet<usize> = par.intersection(&co).copied().collect();
        r.check_with("parabolic-meets-involuted", none(), meet == levi, || {
            let extra: Vec<&str> = meet.symmetric_difference(&levi).map(|&p| alg.name(p)).collect();
            format!("differs at {extra:?}")
        });
        for (id, a, b) in [
            ("parabolic-times-involuted-spans", &self.parabolic, &self.co_parabolic),
            ("involuted-times-parabolic-spans", &self.co_parabolic, &self.parabolic),
        ] {
            let span = product_span(alg, &a.embed, &b.embed);
            r.check_with(id, none(), span.is_full(), || {
                format!("products span dimension {} of {}", span.dim(), alg.dim())
            });
        }

        let par_hat: BTreeSet<usize> = minus_cells(alg, &self.partition, true).into_iter().collect();
        let levi_hat: BTreeSet<usize> = minus_cells(alg, &self.partition, false).into_iter().collect();
        let meet: BTreeSet<usize> = par_hat.intersection(&levi).copied().collect();
        r.check("parabolic-ideal-meets-levi", none(), meet == levi_hat);

        let bar_idx: Vec<usize> = self
            .omega
            .members
            .iter()
            .filter(|(_, e)| *e == 0)
            .map(|&(ci, _)| ci)
            .collect();
        let pieces: Vec<Piece> = bar_idx
            .iter()
            .map(|&ci| {
                let p = self.partition.cells[ci].plus.clone();
                Piece {
                    label: self.partition.cells[ci].label.clone(),
                    cell: ci,
                    rows: p.clone(),
                    cols: p,
                }
            })
            .collect();
        let killed: Vec<usize> = par_hat.iter().copied().collect();
        let via_par = build_sub(alg, alg.datum().poset().restrict(&bar_idx), &pieces, &killed, true);
        match via_par {
            Ok(q) => r.check("parabolic-quotient-matches", none(), q == self.quotient),
            Err(e) => r.check_with("parabolic-quotient-matches", none(), false, || e.to_string()),
        }
        Ok(r)
    }

    /// `(dim A^α, dim Ã^α, dim Ā^α)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.levi.algebra.dim(),
            self.parabolic.algebra.dim(),
            self.quotient.algebra.dim(),
        )
    }
}

/// Span of all products `a_i b_j` of two lists of ambient basis positions.
fn product_span(alg: &Algebra, a: &[usize], b: &[usize]) -> Span {
    let f = alg.field();
    let mut span = Span::new(f, alg.dim());
    for &i in a {
        for &j in b {
            if span.is_full() {
                return span;
            }
            let v = alg.mul_sparse(&[(i, f.one())], &[(j, f.one())]);
            span.insert(v);
        }
    }
    span
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_paper_quiver_example, lam, matrix_algebra, matrix_alpha};
    use crate::linalg::Field;

    fn path() -> (Algebra, AlphaDatum) {
        build_paper_quiver_example(Field::Rational).unwrap()
    }

    fn matrix(n: usize, b: usize) -> (Algebra, AlphaDatum) {
        let a = matrix_algebra(n, Field::Rational).unwrap();
        let ad = matrix_alpha(n, b, Field::Rational).unwrap();
        (a, ad)
    }

    #[test]
    fn assumptions_hold_on_builtins() {
        let (a, ad) = path();
        let r = verify_assumptions(&a, &ad);
        assert!(r.all_pass(), "{r}");
        for b in 2..=4 {
            let (a, ad) = matrix(4, b);
            let r = verify_assumptions(&a, &ad);
            assert!(r.all_pass(), "{r}");
        }
    }

    #[test]
    fn missing_vertex_breaks_the_unit() {
        let (a, ad) = path();
        let lambda: Vec<String> = ad.lambda[..4].to_vec();
        let idem = ad.idempotents[..4].to_vec();
        let cut = AlphaDatum::new(ad.lambda_tilde.clone(), lambda, idem, ad.x.clone(), &ad.map_pairs()).unwrap();
        let r = verify_assumptions(&a, &cut);
        assert!(!r.passed("idempotent-sum-unit"));
    }

    #[test]
    fn path_partition() {
        let (a, ad) = path();
        let p = tableau_partition(&a, &ad).unwrap();
        let l3 = p.cell(&lam(3)).unwrap();
        assert_eq!(l3.t_set(&ad, "3"), ["3"]);
        assert_eq!(l3.t_set(&ad, "4"), ["4"]);
        assert_eq!(l3.part_labels(0), ["3"]);
        assert_eq!(l3.part_labels(1), ["4"]);
        let l0 = p.cell(&lam(0)).unwrap();
        assert!(l0.plus.is_empty());
        assert_eq!(l0.part_labels(1), ["1"]);
        for i in [1, 2, 4, 5] {
            assert!(p.cell(&lam(i)).unwrap().minus.is_empty());
        }
    }

    #[test]
    fn matrix_partition() {
        let (a, ad) = matrix(4, 2);
        let p = tableau_partition(&a, &ad).unwrap();
        let c = p.cell("4").unwrap();
        assert_eq!(c.part_labels(0), ["2", "3", "4"]);
        assert_eq!(c.part_labels(1), ["1"]);
    }

    #[test]
    fn path_omega() {
        let (a, ad) = path();
        let p = tableau_partition(&a, &ad).unwrap();
        let om = omega(&a, &p).unwrap();
        let mut want = vec![omega_label(&lam(0), 1), omega_label(&lam(3), 1)];
        want.extend((1..=5).map(|i| omega_label(&lam(i), 0)));
        let mut got = om.labels().to_vec();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(om.bar_lambda, (1..=5).map(lam).collect::<Vec<_>>());
        assert!(om.poset.gt_label("(λ3,1)", "(λ1,0)"));
        assert!(om.poset.gt_label("(λ0,1)", "(λ3,1)"));
        assert!(!om.poset.gt_label("(λ5,0)", "(λ3,1)"));
    }

    #[test]
    fn path_dimensions() {
        let (a, ad) = path();
        let c = construct(&a, &ad).unwrap();
        assert_eq!(c.dims(), (16, 17, 14));
        let names: Vec<&str> = c.parabolic.algebra.names().iter().map(String::as_str).collect();
        assert!(names.contains(&"a43"));
        assert!(!names.contains(&"a34"));
        let co: Vec<&str> = c.co_parabolic.algebra.names().iter().map(String::as_str).collect();
        assert!(co.contains(&"a34"));
        assert!(!co.contains(&"a43"));
        let r = c.structure_report(&a).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn matrix_dimensions() {
        for n in 3..=5 {
            for b in 2..=n {
                let (a, ad) = matrix(n, b);
                let c = construct(&a, &ad).unwrap();
                let (k, m) = (b - 1, n - b + 1);
                assert_eq!(c.dims(), (k * k + m * m, k * n + m * m, m * m), "n={n} b={b}");
            }
        }
        let (a, ad) = matrix(4, 2);
        let r = construct(&a, &ad).unwrap().structure_report(&a).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn constant_alpha_changes_nothing() {
        let (a, ad) = path();
        let map: Vec<(String, String)> = ad
            .lambda_tilde
            .labels()
            .iter()
            .map(|l| (l.clone(), "t0".to_string()))
            .collect();
        let flat = AlphaDatum::new(ad.lambda_tilde.clone(), ad.lambda.clone(), ad.idempotents.clone(), ad.x.clone(), &map).unwrap();
        assert!(verify_assumptions(&a, &flat).all_pass());
        let c = construct(&a, &flat).unwrap();
        assert_eq!(c.dims(), (18, 18, 18));
        assert!(c.omega.hat.is_empty());
        assert_eq!(c.levi.positions(), (0..18).collect());
    }

    #[test]
    fn non_monotone_alpha_is_reported() {
        let (a, ad) = path();
        let mut map = ad.map_pairs();
        for (l, t) in &mut map {
            if l == "5" {
                *t = "t0".into();
            }
        }
        let bad = AlphaDatum::new(ad.lambda_tilde.clone(), ad.lambda.clone(), ad.idempotents.clone(), ad.x.clone(), &map).unwrap();
        let r = verify_assumptions(&a, &bad);
        assert!(!r.passed("alpha-monotone"));
        assert!(construct(&a, &bad).is_err());
    }
}
