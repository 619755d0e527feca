use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gerbe_bench::{mobius_pair, options, workloads};
use gerbe_core::classify::{enumerate_classes, enumerate_cocycles, equivalent_with};
use gerbe_core::cocycle::{product, verify};
use gerbe_core::corpus;
use gerbe_core::lifting::{compute_obstruction, TwistContext};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("classes");
    group.sample_size(10);
    for w in workloads() {
        group.bench_function(w.name, |b| {
            b.iter(|| enumerate_classes(w.level, &w.structure, &w.nerve, &options(1)).unwrap())
        });
    }
    group.finish();
}

fn cocycle_ops(c: &mut Criterion) {
    let w = &workloads()[0];
    let all = enumerate_cocycles(w.level, &w.structure, &w.nerve, &options(1)).unwrap();
    c.bench_function("verify/bundle1", |b| b.iter(|| all.iter().all(|x| verify(black_box(x)).is_valid())));
    c.bench_function("product/bundle1", |b| b.iter(|| product(black_box(&all[1]), black_box(&all[7])).unwrap()));
    let (mobius, trivial) = mobius_pair();
    c.bench_function("equiv/mobius-trivial", |b| {
        b.iter(|| equivalent_with(black_box(&mobius), black_box(&trivial), &options(1)).unwrap())
    });
}

fn obstruction(c: &mut Criterion) {
    let ctx = TwistContext::new(corpus::crossed_module("z4-doubling").unwrap()).unwrap();
    let w = &workloads()[3];
    let q = gerbe_core::cocycle::bundle_data(&ctx.q, w.nerve.clone(), |i, j| (i + j) % 2).unwrap();
    c.bench_function("obstruction/z4-doubling/sphere-3", |b| {
        b.iter(|| compute_obstruction(&ctx, black_box(&q)).unwrap())
    });
}

criterion_group!(benches, enumeration, cocycle_ops, obstruction);
criterion_main!(benches);
