use criterion::{criterion_group, criterion_main, Criterion};
use qmatroid::analysis::{generate_catalogue, named_f2_matroid};
use qmatroid::construct::{direct_sum, union};
use qmatroid::gf::FieldSpec;
use qmatroid::lattice::enumerate_lattice;
use qmatroid::matroid::check_rank_axioms;
use qmatroid::repr::nonrep_search;
use std::hint::black_box;

fn f2() -> std::sync::Arc<FieldSpec> {
    FieldSpec::new(2, 1, None).unwrap()
}

fn bench_lattice_enumeration(c: &mut Criterion) {
    c.bench_function("enumerate_lattice F_2^4", |b| {
        b.iter(|| enumerate_lattice(f2(), black_box(4)).unwrap())
    });
    c.bench_function("enumerate_lattice F_3^3", |b| {
        let f3 = FieldSpec::new(3, 1, None).unwrap();
        b.iter(|| enumerate_lattice(f3.clone(), black_box(3)).unwrap())
    });
}

fn bench_axiom_check(c: &mut Criterion) {
    let m = direct_sum(
        &named_f2_matroid("U_{1,2}").unwrap(),
        &named_f2_matroid("U_{1,2}").unwrap(),
    )
    .unwrap();
    c.bench_function("check_rank_axioms F_2^4", |b| {
        b.iter(|| check_rank_axioms(m.lattice(), black_box(m.rank_table())).unwrap())
    });
}

fn bench_union(c: &mut Criterion) {
    let p1 = named_f2_matroid("P1").unwrap();
    let p2 = named_f2_matroid("P2").unwrap();
    c.bench_function("union F_2^3", |b| {
        b.iter(|| union(black_box(&p1), black_box(&p2)).unwrap())
    });
}

fn bench_direct_sum(c: &mut Criterion) {
    let u12 = named_f2_matroid("U_{1,2}").unwrap();
    c.bench_function("direct_sum U12+U12", |b| {
        b.iter(|| direct_sum(black_box(&u12), black_box(&u12)).unwrap())
    });
}

fn bench_isomorphism(c: &mut Criterion) {
    let p1 = named_f2_matroid("P1").unwrap();
    let p1s = named_f2_matroid("P1*").unwrap();
    c.bench_function("iso search GL(3,2) negative", |b| {
        b.iter(|| p1.is_isomorphic(black_box(&p1s)).unwrap())
    });
    let other = named_f2_matroid("P1").unwrap();
    c.bench_function("iso search GL(3,2) positive", |b| {
        b.iter(|| p1.is_isomorphic(black_box(&other)).unwrap())
    });
}

fn bench_catalogue(c: &mut Criterion) {
    let mut g = c.benchmark_group("catalogue");
    g.sample_size(10);
    g.bench_function("generate F_2 n=3", |b| {
        b.iter(|| generate_catalogue(f2(), black_box(3), 10_000_000).unwrap())
    });
    g.finish();
}

fn bench_nonrep(c: &mut Criterion) {
    let mut g = c.benchmark_group("nonrep");
    g.sample_size(10);
    g.bench_function("search m<=3", |b| {
        b.iter(|| nonrep_search(black_box(3)).unwrap())
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_lattice_enumeration,
    bench_axiom_check,
    bench_union,
    bench_direct_sum,
    bench_isomorphism,
    bench_catalogue,
    bench_nonrep
);
criterion_main!(benches);
