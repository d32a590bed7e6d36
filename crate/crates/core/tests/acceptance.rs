//! Acceptance criteria 1-9, one PASS/FAIL line each.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use cellua::alpha::{construct, omega_label, verify_assumptions};
use cellua::ingest::{lam, matrix_algebra};
use cellua::relations::{format_partition, run_all, Partition, Suite};
use cellua::repth::{block_count, decomposition_matrix, jacobson_radical, linkage_partition, RepEngine};
use cellua::{Algebra, AlphaDatum, Field, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{builtins, matrix, oracle, path};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn suite(alg: &Algebra, ad: &AlphaDatum) -> Suite {
    match run_all(alg, ad).expect("suite runs") {
        Ok(s) => s,
        Err(r) => panic!("assumptions failed:\n{r}"),
    }
}

struct Ctx {
    path: (Algebra, AlphaDatum),
    path_suite: Suite,
    m42_suite: Suite,
}

fn labels(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(","))
}

fn c1(_: &Ctx) -> Outcome {
    let want = [
        [1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0],
        [0, 0, 1, 1, 0],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ];
    for f in [Field::Rational, Field::prime(23).unwrap()] {
        let (a, _) = path(f);
        let d = decomposition_matrix(&a, Side::Right).map_err(|e| e.to_string())?;
        ensure(d.row_labels.len() == 6 && d.col_labels.len() == 5, || {
            format!("shape {}x{} over {f:?}", d.row_labels.len(), d.col_labels.len())
        })?;
        for (i, row) in want.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let got = d.entry(&lam(i), &lam(j + 1));
                ensure(got == *v, || format!("[W({}) : L({})] = {got} over {f:?}, want {v}", lam(i), lam(j + 1)))?;
            }
        }
    }
    Ok("6x5 table over Q and F_23".into())
}

fn c2(ctx: &Ctx) -> Outcome {
    let s = &ctx.path_suite;
    let dl = &s.data.levi.right.decomposition;
    let rows = [(0, 1), (1, 0), (2, 0), (3, 0), (3, 1), (4, 0), (5, 0)];
    let want = [
        [1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ];
    ensure(dl.row_labels.len() == 7 && dl.col_labels.len() == 5, || "Levi shape".into())?;
    for ((i, e), row) in rows.iter().zip(want) {
        for (j, v) in row.iter().enumerate() {
            let (r, c) = (omega_label(&lam(*i), *e), omega_label(&lam(j + 1), 0));
            let got = dl.entry(&r, &c);
            ensure(got == *v, || format!("Levi [{r} : {c}] = {got}, want {v}"))?;
        }
    }
    let dq = &s.data.quotient.right.decomposition;
    let want = [
        [1, 1, 0, 0, 0],
        [0, 1, 1, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ];
    ensure(dq.row_labels.len() == 5 && dq.col_labels.len() == 5, || "quotient shape".into())?;
    for (i, row) in want.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let got = dq.entry(&lam(i + 1), &lam(j + 1));
            ensure(got == *v, || format!("quotient [{} : {}] = {got}, want {v}", lam(i + 1), lam(j + 1)))?;
        }
    }
    Ok("7x5 Levi table, 5x5 quotient table".into())
}

fn c3(ctx: &Ctx) -> Outcome {
    let s = &ctx.path_suite;
    let l15: Vec<String> = (1..=5).map(lam).collect();
    let lp0 = s.data.lambda_plus_zero().to_vec();
    ensure(lp0 == l15, || format!("Λ⁺₀ = {}", labels(&lp0)))?;
    let mut om = vec![omega_label(&lam(0), 1), omega_label(&lam(3), 1)];
    om.extend((1..=5).map(|i| omega_label(&lam(i), 0)));
    om.sort();
    let mut got = s.construction.omega.labels().to_vec();
    got.sort();
    ensure(got == om, || format!("Ω = {}", labels(&got)))?;
    let o0: Vec<String> = (1..=5).map(|i| omega_label(&lam(i), 0)).collect();
    let got0 = s.data.omega_zero().to_vec();
    ensure(got0 == o0, || format!("Ω₀ = {}", labels(&got0)))?;
    let bar: Vec<String> = s
        .construction
        .quotient
        .algebra
        .datum()
        .cells()
        .iter()
        .map(|c| c.label.clone())
        .collect();
    ensure(bar == l15, || format!("Λ̄⁺ = {}", labels(&bar)))?;
    Ok(format!("Λ⁺₀ = {}, |Ω| = 7, Ω₀ = {}, Λ̄⁺ = {}", labels(&lp0), labels(&got0), labels(&bar)))
}

fn c4(ctx: &Ctx) -> Outcome {
    let s = &ctx.path_suite;
    let (l, p, q) = s.construction.dims();
    let got = (ctx.path.0.dim(), l, p, q);
    ensure(got == (18, 16, 17, 14), || format!("path dims {got:?}"))?;
    let mut cases = 0;
    for n in 3..=5 {
        for b in 2..=n {
            let (a, ad) = matrix(n, b);
            let c = construct(&a, &ad).map_err(|e| e.to_string())?;
            let want = ((b - 1).pow(2) + (n - b + 1).pow(2), (b - 1) * n + (n - b + 1).pow(2), (n - b + 1).pow(2));
            ensure(c.dims() == want, || format!("matrix n={n} b={b}: {:?}, want {want:?}", c.dims()))?;
            cases += 1;
        }
    }
    Ok(format!("path 18/16/17/14, {cases} matrix cases"))
}

fn c5(_: &Ctx) -> Outcome {
    for n in 1..=5 {
        let a = matrix_algebra(n, Field::Rational).map_err(|e| e.to_string())?;
        let d = decomposition_matrix(&a, Side::Right).map_err(|e| e.to_string())?;
        ensure(d.row_labels.len() == 1 && d.col_labels.len() == 1 && d.entries == vec![vec![1]], || {
            format!("M_{n}: decomposition matrix {:?}", d.entries)
        })?;
        let j = jacobson_radical(&a).map_err(|e| e.to_string())?;
        ensure(j.dim() == 0, || format!("M_{n}: radical of dimension {}", j.dim()))?;
        let blocks = block_count(&a, &j);
        ensure(blocks == 1, || format!("M_{n}: {blocks} blocks"))?;
    }
    Ok("n = 1..5".into())
}

fn c6(ctx: &Ctx) -> Outcome {
    let mut total = 0;
    for (name, s) in [("path-example", &ctx.path_suite), ("matrix:n=4,b=2", &ctx.m42_suite)] {
        if let Some(c) = s.report.failures().next() {
            return Err(format!("{name}: {} {} failed ({:?})", c.id, c.labels, c.witness));
        }
        for id in ["levi-standard-splits", "ambient-full-part-iso", "parabolic-zero-part-iso", "ambient-levi-equal-alpha"] {
            ensure(s.report.count(id) > 0, || format!("{name}: {id} never ran"))?;
        }
        total += s.report.checks.len();
    }
    Ok(format!("{total} checks on path-example and matrix:n=4,b=2"))
}

fn c7(ctx: &Ctx) -> Outcome {
    let s = &ctx.path_suite;
    for id in ["ambient-blocks-match-parabolic", "cartan-symmetry", "quotient-blocks-refine-by-alpha"] {
        ensure(s.report.count(id) > 0 && s.report.passed(id), || format!("{id} did not pass"))?;
    }
    let q: Partition = linkage_partition(&s.data.quotient.right.decomposition)
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    let shown = format_partition(&q);
    ensure(shown == "{λ1,λ2,λ3} {λ4,λ5}", || format!("quotient classes {shown}"))?;
    ensure(ctx.m42_suite.report.passed("cartan-symmetry"), || "matrix cartan symmetry".into())?;
    Ok(format!("quotient classes {shown}"))
}

fn mutation_flagged(alg: &Algebra, ad: &AlphaDatum, rng: &mut ChaCha8Rng) -> Option<(String, bool)> {
    let f = alg.field();
    let n = alg.dim();
    let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
    let cur = alg.mul_basis(i, j).to_vec();
    let mut new = cur.clone();
    let what = match rng.random_range(0..3) {
        0 if !cur.is_empty() => {
            let k = rng.random_range(0..cur.len());
            let c = f.from_i64([-1, 2, -2, 3][rng.random_range(0..4)]);
            new[k].1 = &new[k].1 * &c;
            "rescale"
        }
        1 if !cur.is_empty() => {
            new.remove(rng.random_range(0..cur.len()));
            "drop"
        }
        _ => {
            let p = rng.random_range(0..n);
            let c = f.from_i64([1, -1, 2][rng.random_range(0..3)]);
            match new.iter_mut().find(|(q, _)| *q == p) {
                Some(t) => t.1 = &t.1 + &c,
                None => new.push((p, c)),
            }
            "add"
        }
    };
    let mutated = alg.with_product(i, j, new);
    if mutated == *alg {
        return None;
    }
    let flagged = !mutated.verify_cellular().is_ok() || !verify_assumptions(&mutated, ad).all_pass();
    Some((format!("{what} {} * {}", alg.name(i), alg.name(j)), flagged))
}

fn c8(ctx: &Ctx) -> Outcome {
    let (a, ad) = &ctx.path;
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c3_11a5);
    let mut done = 0;
    let mut silent = Vec::new();
    while done < 50 {
        if let Some((what, flagged)) = mutation_flagged(a, ad, &mut rng) {
            done += 1;
            if !flagged {
                silent.push(what);
            }
        }
    }
    ensure(silent.is_empty(), || format!("unflagged mutations: {}", silent.join("; ")))?;

    let all = builtins();
    for (name, alg, _) in &all {
        let r = decomposition_matrix(alg, Side::Right).map_err(|e| e.to_string())?;
        let l = decomposition_matrix(alg, Side::Left).map_err(|e| e.to_string())?;
        ensure(r.same_numbers(&l), || format!("{name}: left and right decomposition matrices differ"))?;
    }
    for (name, alg, ad) in &all {
        let c = construct(alg, ad).map_err(|e| e.to_string())?;
        let r = cellua::relations::form_checks(alg, &c).map_err(|e| e.to_string())?;
        ensure(r.count("gram-block-diagonal") > 0 && r.passed("gram-block-diagonal"), || {
            format!("{name}: Gram matrix not block diagonal")
        })?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x0000_5eed);
    let mut modules = 0;
    for side in [Side::Right, Side::Left] {
        let eng = RepEngine::new(a, side).map_err(|e| e.to_string())?;
        let simples: Vec<(String, cellua::CellModule)> = eng
            .simple_labels()
            .iter()
            .cloned()
            .zip(eng.simples().iter().cloned())
            .collect();
        for cell in a.datum().cells() {
            let w = cellua::module::standard_module(a, &cell.label, side).map_err(|e| e.to_string())?;
            let engine = eng.composition_factors(&w).map_err(|e| e.to_string())?;
            let orc: BTreeMap<String, usize> = oracle::composition_factors(&w, &simples, &mut rng)?;
            ensure(engine == orc, || format!("{side} W({}): engine {engine:?}, oracle {orc:?}", cell.label))?;
            modules += 1;
        }
    }
    Ok(format!(
        "50/50 mutations flagged; left = right on {} built-ins; Gram block-diagonal; oracle agrees on {modules} standard modules",
        all.len()
    ))
}

fn c9(ctx: &Ctx) -> Outcome {
    let m = &ctx.m42_suite.report;
    let c = m.conditions.first().ok_or("no condition on matrix:n=4,b=2")?;
    ensure(c.holds, || format!("fails on matrix:n=4,b=2 ({})", c.detail))?;
    for id in ["levi-zero-simple-nonzero", "condition-ambient-quotient"] {
        ensure(m.count(id) > 0 && m.passed(id), || format!("{id} not verified on matrix:n=4,b=2"))?;
    }
    let p = ctx.path_suite.report.conditions.first().ok_or("no condition on the path example")?;
    ensure(!p.holds, || "holds on the path example".into())?;
    ensure(p.detail.contains("λ1"), || format!("path detail {:?}", p.detail))?;
    Ok(format!("holds on matrix:n=4,b=2; path example: {}", p.detail))
}

fn main() -> ExitCode {
    let start = std::time::Instant::now();
    let ctx = {
        let path = path(Field::Rational);
        let m42 = matrix(4, 2);
        let (ps, ms) = rayon::join(|| suite(&path.0, &path.1), || suite(&m42.0, &m42.1));
        Ctx {
            path,
            path_suite: ps,
            m42_suite: ms,
        }
    };
    let criteria: [(&str, fn(&Ctx) -> Outcome); 9] = [
        ("path-example decomposition matrix", c1),
        ("Levi and quotient decomposition matrices", c2),
        ("index sets on the path example", c3),
        ("dimensions of the constructions", c4),
        ("matrix algebras are semisimple with one block", c5),
        ("theorem suite", c6),
        ("block suite", c7),
        ("property checks", c8),
        ("idempotents detect simples", c9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(|| f(&ctx))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match r {
            Ok(detail) => println!("PASS criterion {} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1?}", 9 - failed, start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
