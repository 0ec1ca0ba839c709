//! Subposet search and full planarity decisions on representative targets.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sublat_bench::member_lattice;
use sublat_core::{is_planar, is_subposet, sharpness_witness, KRName};

fn bench_subposet(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_subposet");
    group.sample_size(30);
    let f0 = member_lattice(KRName::F(0));
    let a1 = member_lattice(KRName::A(1));
    let k5 = member_lattice(KRName::K5);
    // A hit (F_0 into the 12-element sharpness witness) and a miss
    // (F_0 into A_1, K_5 into A_1): both directions matter for cost.
    let witness12 = sharpness_witness(12).unwrap();
    group.bench_function(BenchmarkId::from_parameter("F_0 -> witness 12 (hit)"), |b| {
        b.iter(|| is_subposet(f0.poset(), witness12.poset()))
    });
    group.bench_function(BenchmarkId::from_parameter("F_0 -> A_1 (miss)"), |b| {
        b.iter(|| is_subposet(f0.poset(), a1.poset()))
    });
    group.bench_function(BenchmarkId::from_parameter("K_5 -> A_1 (miss)"), |b| {
        b.iter(|| is_subposet(k5.poset(), a1.poset()))
    });
    group.finish();
}

fn bench_is_planar(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_planar");
    group.sample_size(20);
    let a1 = member_lattice(KRName::A(1));
    let k5 = member_lattice(KRName::K5);
    let witness12 = sharpness_witness(12).unwrap();
    group.bench_function(BenchmarkId::from_parameter("K_5 (planar, 12 el)"), |b| {
        b.iter(|| is_planar(std::hint::black_box(&k5)).unwrap())
    });
    group.bench_function(BenchmarkId::from_parameter("A_1 (non-planar, 10 el)"), |b| {
        b.iter(|| is_planar(std::hint::black_box(&a1)).unwrap())
    });
    group.bench_function(BenchmarkId::from_parameter("witness 12 (non-planar)"), |b| {
        b.iter(|| is_planar(std::hint::black_box(&witness12)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_subposet, bench_is_planar);
criterion_main!(benches);
