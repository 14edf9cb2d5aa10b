use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use petdyn_core::dynsys::{self, SubstitutionSystem};
use petdyn_core::{IntegralPolynomial, WindowSet};
use std::hint::black_box;

fn generation(c: &mut Criterion) {
    c.bench_function("chacon/1e6", |b| b.iter(|| black_box(SubstitutionSystem::chacon())));
}

fn scans(c: &mut Criterion) {
    let sys = SubstitutionSystem::chacon();
    let zero = sys.cylinder("0").unwrap();
    let n = IntegralPolynomial::identity();
    let pairs: Vec<_> = (1..=3).map(|k| (n.scale(&BigInt::from(k)), zero.clone())).collect();
    c.bench_function("return_set/(n,2n,3n)/1e4", |b| {
        b.iter(|| black_box(dynsys::return_set(&sys, &zero, &pairs, (0, 10_000)).unwrap()))
    });
    c.bench_function("density/(n,2n)/50", |b| {
        b.iter(|| {
            black_box(
                dynsys::density_experiment(&sys, &[n.clone(), n.scale(&BigInt::from(2))], 2, (-10_000, 10_000), 50, 1)
                    .unwrap(),
            )
        })
    });
}

fn classification(c: &mut Criterion) {
    let set = WindowSet::from_predicate(0, 10_000_000, |n| n % 7 != 3 && n % 1013 != 0).unwrap();
    c.bench_function("classify/1e7", |b| b.iter(|| black_box(set.classify(Some(50), Some(3)).unwrap())));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = generation, scans, classification
}
criterion_main!(benches);
