use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nilseq_bench::{mixed_expr, nested_floor, policy, sqrt};
use nilseq_core::orbit::heisenberg_fracpart;
use nilseq_core::recurrence::{fibonacci_scan, QuadraticParams};
use num_bigint::BigInt;

fn numeric(c: &mut Criterion) {
    let p = policy();
    let mixed = mixed_expr().unwrap();
    let nested = nested_floor().unwrap();
    let n = BigInt::from(123_456);
    c.bench_function("gp/mixed-expression", |b| {
        b.iter(|| mixed.eval(black_box(&n), &p).unwrap())
    });
    c.bench_function("gp/nested-floor", |b| {
        b.iter(|| nested.eval(black_box(&n), &p).unwrap())
    });
    let params = QuadraticParams::new(1).unwrap();
    c.bench_function("fibonacci_scan/10^4", |b| {
        b.iter(|| fibonacci_scan(&params, black_box(10_000), &p).unwrap())
    });
    let (a, bt) = (sqrt(2).unwrap(), sqrt(3).unwrap());
    c.bench_function("heisenberg_fracpart/n=10^4", |b| {
        b.iter(|| heisenberg_fracpart(&a, &bt, black_box(10_000), &p).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = numeric
}
criterion_main!(benches);
