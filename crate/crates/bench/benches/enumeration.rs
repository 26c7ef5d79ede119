//! Enumeration benchmarks: the exact dichotomy sweep at several shapes and
//! the generative bounded-weights strategy.

use criterion::{criterion_group, criterion_main, Criterion};
use quarkcap_core::threshold::{enumerate_class, enumerate_class_with, Strategy};

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_sweep");
    group.sample_size(20);
    group.bench_function("n2_d1", |b| {
        b.iter(|| enumerate_class(2, 1).expect("enumerates"))
    });
    group.bench_function("n3_d1", |b| {
        b.iter(|| enumerate_class(3, 1).expect("enumerates"))
    });
    group.bench_function("n2_d2", |b| {
        b.iter(|| enumerate_class(2, 2).expect("enumerates"))
    });
    group.finish();
}

fn bench_weights(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_weights");
    group.sample_size(20);
    group.bench_function("n3_bound3", |b| {
        b.iter(|| {
            enumerate_class_with(3, 1, Strategy::BoundedWeights { bound: 3 }, 0, 0)
                .expect("enumerates")
        })
    });
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_weights);
criterion_main!(benches);
