//! Machine checks of the relations between `A`, `A^α`, `Ã^α` and `Ā^α`:
//! forms, standard and simple modules, decomposition numbers, the
//! condition on idempotents, and blocks.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::alpha::{construct, omega_label, verify_assumptions, AlphaConstruction, AlphaDatum, SubAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{zero_vec, ExactMatrix, Scalar, Span};
use crate::module::{pairing, radical_of_standard, standard_module_at, CellModule, Side};
use crate::report::{labels, Report};
use crate::repth::{
    block_count, cartan_via_formula, jacobson_radical, linkage_partition, regular_module, CartanMatrix,
    DecompositionMatrix, Radical, RepEngine,
};

/// Decomposition data of one algebra on one side.
#[derive(Clone, Debug)]
pub struct Sided {
    pub decomposition: DecompositionMatrix,
    /// `dim` of each simple, aligned with the matrix columns
    pub simple_dims: Vec<usize>,
    /// multiplicity of each simple in the regular module
    pub regular: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct AlgebraData {
    pub radical: Radical,
    pub blocks: usize,
    pub right: Sided,
    pub left: Sided,
}

impl AlgebraData {
    pub fn compute(alg: &Algebra) -> Result<AlgebraData> {
        let radical = jacobson_radical(alg)?;
        let sided = |side| -> Result<Sided> {
            let engine = RepEngine::with_radical(alg, side, radical.clone())?;
            Ok(Sided {
                decomposition: engine.decomposition_matrix()?,
                simple_dims: engine.simples().iter().map(CellModule::dim).collect(),
                regular: engine.multiplicities(&regular_module(alg, side)?)?,
            })
        };
        let (right, left) = rayon::join(|| sided(Side::Right), || sided(Side::Left));
        Ok(AlgebraData {
            blocks: block_count(alg, &radical),
            radical,
            right: right?,
            left: left?,
        })
    }

    pub fn side(&self, side: Side) -> &Sided {
        match side {
            Side::Right => &self.right,
            Side::Left => &self.left,
        }
    }
}

/// Decomposition data for the ambient algebra and the three constructions.
#[derive(Clone, Debug)]
pub struct DecompositionData {
    pub ambient: AlgebraData,
    pub levi: AlgebraData,
    pub parabolic: AlgebraData,
    pub quotient: AlgebraData,
}

impl DecompositionData {
    pub fn compute(alg: &Algebra, cons: &AlphaConstruction) -> Result<DecompositionData> {
        let ((a, l), (p, q)) = rayon::join(
            || {
                rayon::join(
                    || AlgebraData::compute(alg),
                    || AlgebraData::compute(&cons.levi.algebra),
                )
            },
            || {
                rayon::join(
                    || AlgebraData::compute(&cons.parabolic.algebra),
                    || AlgebraData::compute(&cons.quotient.algebra),
                )
            },
        );
        Ok(DecompositionData {
            ambient: a?,
            levi: l?,
            parabolic: p?,
            quotient: q?,
        })
    }

    /// Λ⁺₀
    pub fn lambda_plus_zero(&self) -> &[String] {
        &self.ambient.right.decomposition.col_labels
    }

    /// Ω₀
    pub fn omega_zero(&self) -> &[String] {
        &self.levi.right.decomposition.col_labels
    }
}

fn same_alpha(ad: &AlphaDatum, a: &str, b: &str) -> Result<bool> {
    Ok(ad.alpha_index(a)? == ad.alpha_index(b)?)
}

fn sub_cell(sub: &SubAlgebra, label: &str) -> Option<usize> {
    sub.algebra.datum().cell_index(label).ok()
}

/// Agreement of the forms of the four algebras on every cell, the block
/// structure of the ambient form across `T⁺`/`T⁻`, and the induced
/// equalities of simple labels and dimensions.
pub fn form_checks(alg: &Algebra, cons: &AlphaConstruction) -> Result<Report> {
    let mut r = Report::new();
    let mut levi_nonzero = BTreeSet::new();
    let mut par_nonzero = BTreeSet::new();
    for (ci, split) in cons.partition.cells.iter().enumerate() {
        let lab = labels(&[&split.label]);
        let b = pairing(alg, ci)?;
        let (plus, minus) = (&split.plus, &split.minus);
        let all: Vec<usize> = (0..split.t.len()).collect();
        let off = b.select(plus, minus).is_zero() && b.select(minus, plus).is_zero();
        r.check("gram-block-diagonal", lab.clone(), off);

        let mut levi_rank = 0;
        for eps in [0u8, 1] {
            let ol = omega_label(&split.label, eps);
            let part = split.part(eps);
            if let Some(li) = sub_cell(&cons.levi, &ol) {
                let bl = pairing(&cons.levi.algebra, li)?;
                levi_rank += bl.rank();
                if !bl.is_zero() {
                    levi_nonzero.insert(ol.clone());
                }
                r.check("levi-form-agrees", labels(&[&ol]), bl == b.select(part, part));
            }
            if let Some(pi) = sub_cell(&cons.parabolic, &ol) {
                let bp = pairing(&cons.parabolic.algebra, pi)?;
                if !bp.is_zero() {
                    par_nonzero.insert(ol.clone());
                }
                let want = if eps == 0 { b.select(plus, plus) } else { b.select(minus, &all) };
                r.check("parabolic-form-blocks", labels(&[&ol]), bp == want);
            }
        }
        r.check_with("levi-simple-split", lab.clone(), levi_rank == b.rank(), || {
            format!("rank {} on A, {levi_rank} summed over the two parts", b.rank())
        });
        if let Some(qi) = sub_cell(&cons.quotient, &split.label) {
            let bq = pairing(&cons.quotient.algebra, qi)?;
            r.check("quotient-form-agrees", lab, bq == b.select(plus, plus));
        }
    }
    r.check_with("parabolic-simple-labels", labels::<&str>(&[]), levi_nonzero == par_nonzero, || {
        format!("Ω₀ = {levi_nonzero:?}, parabolic simples {par_nonzero:?}")
    });
    Ok(r)
}

/// `F` with `F[i][j] = 1` when source basis label `i` equals target basis
/// label `j`. Unmatched source labels are an error unless `zero_missing`.
fn label_map(src: &CellModule, tgt: &CellModule, zero_missing: bool) -> std::result::Result<ExactMatrix, String> {
    let f = src.field();
    let mut m = ExactMatrix::zeros(f, src.dim(), tgt.dim());
    for (i, l) in src.basis_labels.iter().enumerate() {
        match tgt.basis_labels.iter().position(|k| k == l) {
            Some(j) => m.set(i, j, f.one()),
            None if zero_missing => {}
            None => return Err(format!("label {l} has no image")),
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MapKind {
    Iso,
    Injective,
    Surjective,
}

/// Checks that `F` is a module map of the given kind, exhaustively over the
/// algebra basis.
fn check_map(
    r: &mut Report,
    alg: &Algebra,
    id: &str,
    lab: &str,
    src: &CellModule,
    tgt: &CellModule,
    f: &ExactMatrix,
    kind: MapKind,
) -> bool {
    let rank = f.rank();
    let shape_ok = match kind {
        MapKind::Iso => rank == src.dim() && rank == tgt.dim(),
        MapKind::Injective => rank == src.dim(),
        MapKind::Surjective => rank == tgt.dim(),
    };
    let bad = src.hom_witness(tgt, f);
    let pass = shape_ok && bad.is_none();
    r.check_with(id, lab.to_string(), pass, || match bad {
        Some(p) => format!("not equivariant at {}", alg.name(p)),
        None => format!("rank {rank} from dimension {} to {}", src.dim(), tgt.dim()),
    });
    pass
}

fn image(span: &Span, f: &ExactMatrix) -> Span {
    Span::from_vectors(
        f.field(),
        f.cols(),
        span.basis().iter().map(|v| f.vec_mul(v).expect("matching dimension")),
    )
}

/// `{x : xF ∈ span}`.
fn preimage(span: &Span, f: &ExactMatrix) -> Span {
    let field = f.field();
    let basis = ExactMatrix::from_rows(field, f.cols(), span.basis().to_vec()).expect("rectangular");
    let annihilator = basis.nullspace();
    let rows: Vec<Vec<Scalar>> = annihilator
        .iter()
        .map(|w| f.mul_vec(w).expect("matching dimension"))
        .collect();
    let m = ExactMatrix::from_rows(field, f.rows(), rows).expect("rectangular");
    Span::from_vectors(field, f.rows(), m.nullspace())
}

/// `a ⊕ b` inside `k^{n+m}`.
fn direct_sum_span(a: &Span, b: &Span) -> Span {
    let f = a.field();
    let (n, m) = (a.ambient(), b.ambient());
    let mut out = Span::new(f, n + m);
    for v in a.basis() {
        let mut w = v.clone();
        w.extend(zero_vec(f, m));
        out.insert(w);
    }
    for v in b.basis() {
        let mut w = zero_vec(f, n);
        w.extend(v.iter().cloned());
        out.insert(w);
    }
    out
}

fn span_check(r: &mut Report, id: &str, lab: &str, got: &Span, want: &Span) {
    let pass = got.contains_span(want) && want.contains_span(got);
    r.check_with(id, lab.to_string(), pass, || {
        format!("dimension {} against {}", got.dim(), want.dim())
    });
}

/// A standard module of a constructed algebra with its form radical.
struct Std {
    module: CellModule,
    radical: Span,
}

fn std_module(sub: &SubAlgebra, ci: usize, side: Side) -> Result<Std> {
    Ok(Std {
        module: standard_module_at(&sub.algebra, ci, side)?,
        radical: radical_of_standard(&sub.algebra, ci, side)?,
    })
}

/// Explicit basis-labelled maps between standard modules at one cell `λ` of
/// the ambient algebra, each checked equivariant over every basis element
/// of the smaller algebra, with the induced statements about radicals and
/// heads. Statements about `(λ,ε) ∉ Ω` are skipped.
pub fn module_checks_at(alg: &Algebra, cons: &AlphaConstruction, ci: usize) -> Result<Report> {
    let mut r = Report::new();
    let split = &cons.partition.cells[ci];
    let lam = split.label.as_str();
    let lab = labels(&[lam]);
    let f = alg.field();
    let w = standard_module_at(alg, ci, Side::Right)?;
    let sw = standard_module_at(alg, ci, Side::Left)?;
    let rad_w = radical_of_standard(alg, ci, Side::Right)?;
    let rad_sw = radical_of_standard(alg, ci, Side::Left)?;

    let levi_at = |eps, side| -> Result<Option<Std>> {
        sub_cell(&cons.levi, &omega_label(lam, eps))
            .map(|i| std_module(&cons.levi, i, side))
            .transpose()
    };
    let par_at = |eps, side| -> Result<Option<Std>> {
        sub_cell(&cons.parabolic, &omega_label(lam, eps))
            .map(|i| std_module(&cons.parabolic, i, side))
            .transpose()
    };
    let z0 = levi_at(0, Side::Right)?;
    let z1 = levi_at(1, Side::Right)?;
    let sz0 = levi_at(0, Side::Left)?;
    let sz1 = levi_at(1, Side::Left)?;
    let zt0 = par_at(0, Side::Right)?;
    let zt1 = par_at(1, Side::Right)?;
    let szt0 = par_at(0, Side::Left)?;
    let szt1 = par_at(1, Side::Left)?;

    // Z(λ,0) ⊕ Z(λ,1), with its radical and the span of the first summand
    let (zsum, zsum_rad, zsum_first) = match (&z0, &z1) {
        (Some(a), Some(b)) => (
            a.module.direct_sum(&b.module, format!("{lam} sum"))?,
            direct_sum_span(&a.radical, &b.radical),
            direct_sum_span(&Span::whole(f, a.module.dim()), &Span::new(f, b.module.dim())),
        ),
        (Some(a), None) => (a.module.clone(), a.radical.clone(), Span::whole(f, a.module.dim())),
        (None, Some(b)) => (b.module.clone(), b.radical.clone(), Span::new(f, b.module.dim())),
        (None, None) => return Err(Error::Internal(format!("no Levi cell over {lam}"))),
    };

    // the Levi algebra acting on W^λ
    let w_levi = w.restrict(&cons.levi.embed);
    let map = label_map(&zsum, &w_levi, false).map_err(Error::Internal)?;
    if check_map(&mut r, alg, "levi-standard-splits", &lab, &zsum, &w_levi, &map, MapKind::Iso) {
        span_check(&mut r, "levi-radical-splits", &lab, &image(&zsum_rad, &map), &rad_w);
    }

    if let (Some(qi), Some(z0)) = (sub_cell(&cons.quotient, lam), &z0) {
        let images: Vec<Vec<(usize, Scalar)>> = cons
            .levi_to_quotient
            .iter()
            .map(|q| q.map(|q| vec![(q, f.one())]).unwrap_or_default())
            .collect();
        let zbar = standard_module_at(&cons.quotient.algebra, qi, Side::Right)?;
        let zbar_rad = radical_of_standard(&cons.quotient.algebra, qi, Side::Right)?;
        let zbar_levi = zbar.pull_back(&images);
        let g = label_map(&z0.module, &zbar_levi, false).map_err(Error::Internal)?;
        if check_map(&mut r, alg, "quotient-standard-iso", &lab, &z0.module, &zbar_levi, &g, MapKind::Iso) {
            span_check(&mut r, "quotient-radical-matches", &lab, &image(&z0.radical, &g), &zbar_rad);
        }
    }

    // Ã^α modules restricted to A^α
    let emb = &cons.levi_in_parabolic;
    if let (Some(z0), Some(zt0)) = (&z0, &zt0) {
        let tgt = zt0.module.restrict(emb);
        let m = label_map(&z0.module, &tgt, false).map_err(Error::Internal)?;
        if check_map(&mut r, alg, "parabolic-zero-part-iso", &lab, &z0.module, &tgt, &m, MapKind::Iso) {
            span_check(&mut r, "parabolic-zero-part-radical", &lab, &image(&z0.radical, &m), &zt0.radical);
        }
    }
    if let Some(zt1) = &zt1 {
        let tgt = zt1.module.restrict(emb);
        let m = label_map(&zsum, &tgt, false).map_err(Error::Internal)?;
        if check_map(&mut r, alg, "parabolic-full-part-iso", &lab, &zsum, &tgt, &m, MapKind::Iso) {
            let want = zsum_first.sum(&zsum_rad);
            span_check(&mut r, "parabolic-full-part-radical", &lab, &image(&want, &m), &zt1.radical);
        }
    }
    for (id, src, tgt) in [
        ("parabolic-left-zero-part", &sz0, &szt0),
        ("parabolic-left-minus-part", &sz1, &szt1),
    ] {
        if let (Some(s), Some(t)) = (src, tgt) {
            let tm = t.module.restrict(emb);
            let m = label_map(&s.module, &tm, false).map_err(Error::Internal)?;
            if check_map(&mut r, alg, &format!("{id}-iso"), &lab, &s.module, &tm, &m, MapKind::Iso) {
                span_check(&mut r, &format!("{id}-radical"), &lab, &image(&s.radical, &m), &t.radical);
            }
        }
    }

    // A modules restricted to Ã^α, right side
    let wp = w.restrict(&cons.parabolic.embed);
    let mut head = rad_w.clone();
    if let Some(zt0) = &zt0 {
        let m = label_map(&zt0.module, &wp, false).map_err(Error::Internal)?;
        if check_map(&mut r, alg, "ambient-zero-part-embeds", &lab, &zt0.module, &wp, &m, MapKind::Injective) {
            span_check(&mut r, "ambient-radical-pullback", &lab, &preimage(&rad_w, &m), &zt0.radical);
        }
        head = head.sum(&image(&Span::whole(f, zt0.module.dim()), &m));
    }
    match &zt1 {
        Some(zt1) => {
            let m = label_map(&zt1.module, &wp, false).map_err(Error::Internal)?;
            if check_map(&mut r, alg, "ambient-full-part-iso", &lab, &zt1.module, &wp, &m, MapKind::Iso) {
                span_check(&mut r, "ambient-head-quotient", &lab, &image(&zt1.radical, &m), &head);
            }
        }
        None => r.check("ambient-head-quotient", lab.clone(), head.is_full()),
    }

    // left side
    let swp = sw.restrict(&cons.parabolic.embed);
    let mut shead = rad_sw.clone();
    if let Some(szt1) = &szt1 {
        let m = label_map(&szt1.module, &swp, false).map_err(Error::Internal)?;
        if check_map(&mut r, alg, "ambient-left-minus-part-embeds", &lab, &szt1.module, &swp, &m, MapKind::Injective) {
            span_check(&mut r, "ambient-left-radical-pullback", &lab, &preimage(&rad_sw, &m), &szt1.radical);
        }
        shead = shead.sum(&image(&Span::whole(f, szt1.module.dim()), &m));
    }
    match &szt0 {
        Some(szt0) => {
            let g = label_map(&swp, &szt0.module, true).map_err(Error::Internal)?;
            if check_map(&mut r, alg, "ambient-left-zero-part-quotient", &lab, &swp, &szt0.module, &g, MapKind::Surjective) {
                span_check(&mut r, "ambient-left-head-quotient", &lab, &preimage(&szt0.radical, &g), &shead);
            }
        }
        None => r.check("ambient-left-head-quotient", lab.clone(), shead.is_full()),
    }
    Ok(r)
}

/// [`module_checks_at`] for every cell, in parallel, merged in cell order.
pub fn module_checks(alg: &Algebra, cons: &AlphaConstruction) -> Result<Report> {
    let parts = (0..cons.partition.cells.len())
        .into_par_iter()
        .map(|ci| module_checks_at(alg, cons, ci))
        .collect::<Result<Vec<_>>>()?;
    let mut r = Report::new();
    for p in parts {
        r.extend(p);
    }
    Ok(r)
}

fn check_equal(r: &mut Report, id: &str, lab: &[&str], values: &[(&str, usize)]) {
    let pass = values.windows(2).all(|w| w[0].1 == w[1].1);
    r.check_with(id, labels(lab), pass, || {
        let parts: Vec<String> = values.iter().map(|(n, v)| format!("{n}={v}")).collect();
        parts.join(" ")
    });
}

/// Entrywise identities between the decomposition numbers of the four
/// algebras. Missing rows and columns count as zero.
pub fn decomposition_checks(cons: &AlphaConstruction, ad: &AlphaDatum, data: &DecompositionData) -> Result<Report> {
    let mut r = Report::new();
    let da = &data.ambient.right.decomposition;
    let da_l = &data.ambient.left.decomposition;
    let dl = &data.levi.right.decomposition;
    let dl_l = &data.levi.left.decomposition;
    let dp = &data.parabolic.right.decomposition;
    let dp_l = &data.parabolic.left.decomposition;
    let dq = &data.quotient.right.decomposition;
    let dq_l = &data.quotient.left.decomposition;
    let omega0: BTreeSet<&str> = data.omega_zero().iter().map(String::as_str).collect();
    let lambdas: Vec<&str> = cons.partition.cells.iter().map(|c| c.label.as_str()).collect();
    let om = &cons.omega;

    for (id, l, rt) in [
        ("ambient-sides-agree", da_l, da),
        ("levi-sides-agree", dl_l, dl),
        ("quotient-sides-agree", dq_l, dq),
    ] {
        r.check(id, labels::<&str>(&[]), l.same_numbers(rt));
    }

    for &lam in &lambdas {
        let (l0, l1) = (omega_label(lam, 0), omega_label(lam, 1));
        for mu in data.lambda_plus_zero() {
            let mu = mu.as_str();
            let (m0, m1) = (omega_label(mu, 0), omega_label(mu, 1));
            let eq = same_alpha(ad, lam, mu)?;
            let (has0, has1) = (omega0.contains(m0.as_str()), omega0.contains(m1.as_str()));
            let lab = [lam, mu];
            let a = da.entry(lam, mu);

            if om.contains(lam, 0) && has0 {
                check_equal(&mut r, "levi-quotient-zero-part", &lab, &[
                    ("levi", dl.entry(&l0, &m0)),
                    ("quotient", dq.entry(lam, mu)),
                ]);
                if !eq {
                    r.check("levi-zero-part-no-unequal-simples", labels(&lab), dl.entry(&l0, &m0) == 0);
                }
            }
            if om.contains(lam, 0) && has1 {
                r.check("levi-zero-part-no-minus-simples", labels(&lab), dl.entry(&l0, &m1) == 0);
            }
            if om.contains(lam, 1) && has0 && eq {
                r.check("levi-minus-part-no-equal-simples", labels(&lab), dl.entry(&l1, &m0) == 0);
            }

            if has0 && eq {
                check_equal(&mut r, "ambient-levi-equal-alpha", &lab, &[
                    ("ambient", a),
                    ("levi", dl.entry(&l0, &m0)),
                    ("quotient", dq.entry(lam, mu)),
                ]);
                check_equal(&mut r, "ambient-parabolic-equal-alpha", &lab, &[
                    ("ambient", a),
                    ("parabolic", dp.entry(&l0, &m0)),
                ]);
                check_equal(&mut r, "sides-agree-equal-alpha", &lab, &[
                    ("parabolic", dp.entry(&l0, &m0)),
                    ("levi", dl.entry(&l0, &m0)),
                    ("levi-left", dl_l.entry(&l0, &m0)),
                    ("parabolic-left", dp_l.entry(&l0, &m0)),
                ]);
            }
            if has0 && !eq {
                check_equal(&mut r, "ambient-levi-unequal-alpha", &lab, &[
                    ("ambient", a),
                    ("levi", dl.entry(&l1, &m0)),
                ]);
                check_equal(&mut r, "ambient-parabolic-unequal-alpha", &lab, &[
                    ("ambient", a),
                    ("parabolic", dp.entry(&l1, &m0)),
                ]);
                check_equal(&mut r, "sides-agree-unequal-alpha", &lab, &[
                    ("parabolic", dp.entry(&l1, &m0)),
                    ("levi", dl.entry(&l1, &m0)),
                    ("levi-left", dl_l.entry(&l1, &m0)),
                    ("parabolic-left", dp_l.entry(&l1, &m0)),
                ]);
            }
            if has1 {
                check_equal(&mut r, "ambient-levi-minus-simple", &lab, &[
                    ("ambient", a),
                    ("levi", dl.entry(&l1, &m1)),
                ]);
                check_equal(&mut r, "ambient-parabolic-minus-simple", &lab, &[
                    ("ambient", a),
                    ("parabolic", dp.entry(&l1, &m1)),
                ]);
                check_equal(&mut r, "sides-agree-minus-simple", &lab, &[
                    ("parabolic", dp.entry(&l1, &m1)),
                    ("levi", dl.entry(&l1, &m1)),
                    ("levi-left", dl_l.entry(&l1, &m1)),
                    ("parabolic-left", dp_l.entry(&l1, &m1)),
                ]);
            }
        }
    }

    for mu in data.lambda_plus_zero() {
        let present = omega0.contains(omega_label(mu, 0).as_str()) || omega0.contains(omega_label(mu, 1).as_str());
        r.check("levi-simple-nonvanishing", labels(&[mu]), present);
    }
    for lam in &dq.row_labels {
        for mu in &dq.col_labels {
            if !same_alpha(ad, lam, mu)? {
                r.check("quotient-no-unequal-simples", labels(&[lam, mu]), dq.entry(lam, mu) == 0);
            }
        }
    }
    Ok(r)
}

/// Whether every `μ ∈ Λ⁺₀` lies in `Λ` and `e_μ` has a term outside the
/// cells strictly above `μ`. The detail names the first obstruction.
pub fn condition_c(alg: &Algebra, ad: &AlphaDatum, lambda_plus_zero: &[String]) -> (bool, String) {
    let missing: Vec<&str> = lambda_plus_zero
        .iter()
        .filter(|m| ad.idempotent(m).is_none())
        .map(String::as_str)
        .collect();
    if !missing.is_empty() {
        return (false, format!("not in Λ: {}", missing.join(",")));
    }
    let datum = alg.datum();
    let lp = datum.poset();
    for mu in lambda_plus_zero {
        let Ok(mi) = datum.cell_index(mu) else {
            return (false, format!("{mu} is not a cell"));
        };
        let e = ad.idempotent(mu).expect("checked above");
        let survives = e.terms().iter().any(|(p, _)| {
            let (ci, _, _) = datum.locate(*p);
            !lp.gt(ci, mi)
        });
        if !survives {
            return (false, format!("e_{mu} lies in the cells above {mu}"));
        }
    }
    (true, format!("Λ⁺₀ = {{{}}} ⊆ Λ, each e_μ survives modulo the cells above μ", lambda_plus_zero.join(",")))
}

/// The condition line, and when it holds the consequences: `(μ,0) ∈ Ω₀`
/// for all `μ ∈ Λ⁺₀` and the three-way equality for equal `α`.
pub fn condition_checks(alg: &Algebra, ad: &AlphaDatum, data: &DecompositionData) -> Result<Report> {
    let mut r = Report::new();
    let (holds, detail) = condition_c(alg, ad, data.lambda_plus_zero());
    r.condition("idempotents-detect-simples", holds, detail);
    if !holds {
        return Ok(r);
    }
    let omega0: BTreeSet<&str> = data.omega_zero().iter().map(String::as_str).collect();
    for mu in data.lambda_plus_zero() {
        r.check("levi-zero-simple-nonzero", labels(&[mu]), omega0.contains(omega_label(mu, 0).as_str()));
    }
    let da = &data.ambient.right.decomposition;
    let dl = &data.levi.right.decomposition;
    let dq = &data.quotient.right.decomposition;
    for lam in &da.row_labels {
        for mu in data.lambda_plus_zero() {
            if same_alpha(ad, lam, mu)? {
                check_equal(&mut r, "condition-ambient-quotient", &[lam, mu], &[
                    ("ambient", da.entry(lam, mu)),
                    ("levi", dl.entry(&omega_label(lam, 0), &omega_label(mu, 0))),
                    ("quotient", dq.entry(lam, mu)),
                ]);
            }
        }
    }
    Ok(r)
}

pub type Partition = BTreeSet<BTreeSet<String>>;

fn as_partition(classes: &[Vec<String>]) -> Partition {
    classes.iter().map(|c| c.iter().cloned().collect()).collect()
}

/// Joins overlapping sets.
fn merge(sets: Vec<BTreeSet<String>>) -> Partition {
    let mut out: Vec<BTreeSet<String>> = Vec::new();
    for s in sets {
        let (hit, rest): (Vec<_>, Vec<_>) = out.into_iter().partition(|o| !o.is_disjoint(&s));
        let mut joined = s;
        for h in hit {
            joined.extend(h);
        }
        out = rest;
        out.push(joined);
    }
    out.into_iter().collect()
}

pub fn format_partition(p: &Partition) -> String {
    let parts: Vec<String> = p
        .iter()
        .map(|c| format!("{{{}}}", c.iter().cloned().collect::<Vec<_>>().join(",")))
        .collect();
    parts.join(" ")
}

/// Connected components of the simples under `C(x,y) > 0`.
fn cartan_components(c: &CartanMatrix) -> Vec<usize> {
    let n = c.labels.len();
    let mut comp: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            for y in 0..n {
                if (c.entries[x][y] > 0 || c.entries[y][x] > 0) && comp[x] != comp[y] {
                    let m = comp[x].min(comp[y]);
                    comp[x] = m;
                    comp[y] = m;
                    changed = true;
                }
            }
        }
    }
    comp
}

/// Linkage partition of `Λ⁺` induced from the right standard modules of
/// `Ã^α` (`≈`).
pub fn parabolic_blocks_on_lambda(cons: &AlphaConstruction, data: &DecompositionData) -> Partition {
    let owner: BTreeMap<String, String> = cons
        .omega
        .members
        .iter()
        .map(|&(ci, e)| {
            let lam = cons.partition.cells[ci].label.clone();
            (omega_label(&lam, e), lam)
        })
        .collect();
    let classes = linkage_partition(&data.parabolic.right.decomposition);
    merge(
        classes
            .iter()
            .map(|c| c.iter().map(|l| owner[l].clone()).collect())
            .collect(),
    )
}

/// Blocks of the four algebras: linkage classes against each other and
/// against the centre, the Cartan matrices of `Ã^α` against its regular
/// modules, and the open relations reported as information.
pub fn block_checks(alg: &Algebra, cons: &AlphaConstruction, ad: &AlphaDatum, data: &DecompositionData) -> Result<Report> {
    let mut r = Report::new();
    let none = || labels::<&str>(&[]);
    let sim = as_partition(&linkage_partition(&data.ambient.right.decomposition));
    let approx = parabolic_blocks_on_lambda(cons, data);
    r.check_with("ambient-blocks-match-parabolic", none(), sim == approx, || {
        format!("A: {} parabolic: {}", format_partition(&sim), format_partition(&approx))
    });

    let par_classes = linkage_partition(&data.parabolic.right.decomposition);
    for split in &cons.partition.cells {
        let (l0, l1) = (omega_label(&split.label, 0), omega_label(&split.label, 1));
        if cons.omega.contains(&split.label, 0) && cons.omega.contains(&split.label, 1) {
            let linked = par_classes.iter().any(|c| c.contains(&l0) && c.contains(&l1));
            r.check("parabolic-zero-linked-to-full", labels(&[&split.label]), linked);
        }
    }

    let quotient = as_partition(&linkage_partition(&data.quotient.right.decomposition));
    let bar: BTreeSet<&str> = cons.omega.bar_lambda.iter().map(String::as_str).collect();
    let mut refined = Partition::new();
    for class in &sim {
        let mut fibres: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        for l in class.iter().filter(|l| bar.contains(l.as_str())) {
            fibres.entry(ad.alpha_index(l)?).or_default().insert(l.clone());
        }
        refined.extend(fibres.into_values());
    }
    r.check_with("quotient-blocks-refine-by-alpha", none(), quotient == refined, || {
        format!("quotient: {} refinement: {}", format_partition(&quotient), format_partition(&refined))
    });

    for (id, count, classes) in [
        ("block-count-ambient", data.ambient.blocks, sim.len()),
        ("block-count-parabolic", data.parabolic.blocks, approx.len()),
        ("block-count-quotient", data.quotient.blocks, quotient.len()),
    ] {
        r.check_with(id, none(), count == classes, || {
            format!("centre gives {count} blocks, linkage gives {classes}")
        });
    }

    let p = &data.parabolic;
    let c = cartan_via_formula(&p.left.decomposition, &p.right.decomposition)?;
    let cs = cartan_via_formula(&p.right.decomposition, &p.left.decomposition)?;
    let n = c.labels.len();
    let symmetric = (0..n).all(|x| (0..n).all(|y| c.entries[x][y] == cs.entries[y][x]));
    r.check("cartan-symmetry", none(), symmetric);
    for (id, sided, m) in [
        ("cartan-regular-right", &p.right, &c),
        ("cartan-regular-left", &p.left, &cs),
    ] {
        for y in 0..n {
            let want: usize = (0..n).map(|x| sided.simple_dims[x] * m.entries[x][y]).sum();
            r.check_with(id, labels(&[&m.labels[y]]), sided.regular[y] == want, || {
                format!("regular module has {} copies, formula gives {want}", sided.regular[y])
            });
        }
    }
    r.check("parabolic-simple-dims-agree", none(), p.right.simple_dims == p.left.simple_dims);

    let comp = cartan_components(&c);
    let dp = &p.right.decomposition;
    let mut row_block = BTreeMap::new();
    for (row, entries) in dp.row_labels.iter().zip(&dp.entries) {
        let blocks: BTreeSet<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(x, _)| comp[x])
            .collect();
        r.check_with("standard-factors-one-block", labels(&[row]), blocks.len() == 1, || {
            format!("factors in {} blocks", blocks.len())
        });
        if let Some(&b) = blocks.iter().next() {
            row_block.insert(row.clone(), b);
        }
    }
    let mut by_block: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for (row, b) in row_block {
        by_block.entry(b).or_default().insert(row);
    }
    let by_block: Partition = by_block.into_values().collect();
    r.check("standard-linkage-is-block", none(), by_block == as_partition(&par_classes));

    let levi = as_partition(&linkage_partition(&data.levi.right.decomposition));
    r.info(format!("levi-linkage {}", format_partition(&levi)));
    r.info(format!("ambient-linkage {}", format_partition(&sim)));
    let left = as_partition(&linkage_partition(&p.left.decomposition));
    r.info(format!("parabolic-left-linkage {}", format_partition(&left)));
    let _ = alg;
    Ok(r)
}

/// Everything computed for one `(A, datum)` pair.
pub struct Suite {
    pub construction: AlphaConstruction,
    pub data: DecompositionData,
    pub report: Report,
}

/// The assumption checks, then (if they pass) every structural, module,
/// decomposition, condition and block check. On failed assumptions the
/// construction is not attempted and only the assumption report returns.
pub fn run_all(alg: &Algebra, ad: &AlphaDatum) -> Result<std::result::Result<Suite, Report>> {
    let mut report = verify_assumptions(alg, ad);
    if !report.all_pass() {
        return Ok(Err(report));
    }
    let cons = construct(alg, ad)?;
    report.extend(cons.structure_report(alg)?);
    let (data, forms_modules) = rayon::join(
        || DecompositionData::compute(alg, &cons),
        || -> Result<(Report, Report)> { Ok((form_checks(alg, &cons)?, module_checks(alg, &cons)?)) },
    );
    let data = data?;
    let (forms, modules) = forms_modules?;
    report.extend(forms);
    report.extend(modules);
    report.extend(decomposition_checks(&cons, ad, &data)?);
    report.extend(condition_checks(alg, ad, &data)?);
    report.extend(block_checks(alg, &cons, ad, &data)?);
    Ok(Ok(Suite {
        construction: cons,
        data,
        report,
    }))
}
