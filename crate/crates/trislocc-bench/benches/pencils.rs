use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use trislocc::exact::{gr, Eigenvalue};
use trislocc::hierarchy::{reach, resource_structure};
use trislocc::kcf::{kcf_reduce, KroneckerStructure};
use trislocc::pencil::{invariant_polynomials, invariant_polynomials_via_minors};
use trislocc::slocc::generic_structure;
use trislocc::transform::{generic_step, lm_to_distinct, SearchConfig};
use trislocc_bench::scrambled;

fn mixed() -> KroneckerStructure {
    let eigen = vec![(Eigenvalue::finite(0), vec![2]), (Eigenvalue::Infinite, vec![1])];
    KroneckerStructure::new(0, 0, vec![1, 2], vec![1], eigen).unwrap()
}

fn invariants(c: &mut Criterion) {
    let p = scrambled(&mixed(), 7);
    c.bench_function("invariants/smith", |b| b.iter(|| invariant_polynomials(black_box(&p))));
    c.bench_function("invariants/minors", |b| b.iter(|| invariant_polynomials_via_minors(black_box(&p))));
    c.bench_function("kcf_reduce/mixed", |b| b.iter(|| kcf_reduce(black_box(&p)).unwrap()));
}

fn transforms(c: &mut Criterion) {
    let xs: Vec<_> = (0..5).map(gr).collect();
    c.bench_function("lm_to_distinct/5", |b| b.iter(|| lm_to_distinct(black_box(&xs)).unwrap()));
    c.bench_function("generic_step/7", |b| b.iter(|| generic_step(black_box(&[2, 2, 3]), &[3, 4]).unwrap()));
}

fn reachability(c: &mut Criterion) {
    let src = generic_structure(4, 6).unwrap();
    let dst = generic_structure(4, 5).unwrap();
    c.bench_function("reach/generic_4_6", |b| b.iter(|| reach(black_box(&src), &dst, SearchConfig::default())));
    let omega = resource_structure(4).unwrap();
    let ghz4 = generic_structure(4, 4).unwrap();
    c.bench_function("reach/resource_4", |b| b.iter(|| reach(black_box(&omega), &ghz4, SearchConfig::default())));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = invariants, transforms, reachability
}
criterion_main!(benches);
