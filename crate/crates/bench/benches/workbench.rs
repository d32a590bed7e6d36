use cellua::ingest::{build_paper_quiver_example, matrix_algebra, matrix_alpha};
use cellua::relations::run_all;
use cellua::repth::{decomposition_matrix, jacobson_radical};
use cellua::{Field, Side};
use criterion::{BenchmarkId, Criterion};

fn radical(c: &mut Criterion) {
    let mut group = c.benchmark_group("radical");
    for n in [3, 5, 7] {
        let a = matrix_algebra(n, Field::Rational).unwrap();
        group.bench_function(BenchmarkId::new("matrix", n), |b| b.iter(|| jacobson_radical(&a).unwrap()));
    }
    let (a, _) = build_paper_quiver_example(Field::Rational).unwrap();
    group.bench_function("path-example", |b| b.iter(|| jacobson_radical(&a).unwrap()));
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decomposition");
    for f in [Field::Rational, Field::Prime(23)] {
        let (a, _) = build_paper_quiver_example(f).unwrap();
        group.bench_function(BenchmarkId::new("path-example", f), |b| {
            b.iter(|| decomposition_matrix(&a, Side::Right).unwrap())
        });
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    let (a, ad) = build_paper_quiver_example(Field::Rational).unwrap();
    group.bench_function("path-example", |b| b.iter(|| run_all(&a, &ad).unwrap()));
    let m = matrix_algebra(4, Field::Rational).unwrap();
    let md = matrix_alpha(4, 2, Field::Rational).unwrap();
    group.bench_function("matrix:n=4,b=2", |b| b.iter(|| run_all(&m, &md).unwrap()));
    group.finish();
}

criterion::criterion_group!(benches, radical, decomposition, suite);
criterion::criterion_main!(benches);
