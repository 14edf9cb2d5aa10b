use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use petdyn_bench::{element_pairs, gpoly_pairs, systems};
use petdyn_core::pet::{self, PetOptions};
use petdyn_core::{GroupModel, PolySystem, Rule};
use std::hint::black_box;

fn group_multiply(c: &mut Criterion) {
    for model in [GroupModel::heisenberg(), GroupModel::ut4()] {
        let pairs = element_pairs(&model, 256);
        c.bench_function(&format!("multiply/{}", model.name()), |b| {
            b.iter(|| {
                for (x, y) in &pairs {
                    black_box(model.multiply(x, y).unwrap());
                }
            })
        });
    }
}

fn gpoly_multiply(c: &mut Criterion) {
    for model in [GroupModel::heisenberg().shared(), GroupModel::ut4().shared()] {
        let pairs = gpoly_pairs(&model, 32);
        c.bench_function(&format!("gpoly_multiply/{}", model.name()), |b| {
            b.iter(|| {
                for (g, h) in &pairs {
                    black_box(g.multiply(h).unwrap());
                }
            })
        });
    }
}

fn reduction(c: &mut Criterion) {
    let corpus = systems(20);
    let ell0 = PetOptions { ell: 0, ..PetOptions::default() };
    c.bench_function("pet_reduce/quotient/20", |b| {
        b.iter(|| {
            for a in &corpus {
                black_box(pet::pet_reduce(a, Rule::Quotient).unwrap());
            }
        })
    });
    c.bench_function("pet_reduce/proof_step_ell0/20", |b| {
        b.iter(|| {
            for a in &corpus {
                black_box(pet::pet_reduce_with(a, Rule::ProofStep, ell0).unwrap());
            }
        })
    });
    let z = GroupModel::abelian(1).shared();
    let pair = PolySystem::parse(&z, &["T^{n^2}", "T^{2n^2}"]).unwrap();
    c.bench_function("pet_reduce/proof_step_ell2/square_pair", |b| {
        b.iter_batched(|| pair.clone(), |a| pet::pet_reduce(&a, Rule::ProofStep).unwrap(), BatchSize::SmallInput)
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = group_multiply, gpoly_multiply, reduction
}
criterion_main!(benches);
