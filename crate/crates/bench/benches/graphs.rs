use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use graphflow::cocycle::delta_matrix;
use graphflow::graph::examples;
use graphflow::{canonicalize, delta, enumerate, Flavor, Limits};

fn canonical_forms(c: &mut Criterion) {
    let k4 = examples::manifold_k4();
    let bubble = examples::knot_bubble();
    c.bench_function("canonicalize K4", |b| {
        b.iter(|| canonicalize(black_box(&k4)))
    });
    c.bench_function("canonicalize knot bubble", |b| {
        b.iter(|| canonicalize(black_box(&bubble)))
    });
    c.bench_function("delta tripod", |b| {
        b.iter(|| delta(black_box(&examples::knot_tripod())))
    });
}

fn enumeration(c: &mut Criterion) {
    let limits = Limits::default();
    c.bench_function("enumerate knot ord 3 deg 1", |b| {
        b.iter(|| enumerate(Flavor::Knot, 3, 1, true, &limits).unwrap())
    });
    c.bench_function("delta matrix knot ord 2", |b| {
        b.iter(|| delta_matrix(Flavor::Knot, 2, &limits).unwrap())
    });
}

criterion_group!(benches, canonical_forms, enumeration);
criterion_main!(benches);
