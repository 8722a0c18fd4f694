use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plab_core::codes::{enumerate_bj, involution};
use plab_core::dag::extract_coefficients;
use plab_core::rewrite::{eval_atom, maxpart_system, minpart_system, Atom, Memo};

fn extraction(c: &mut Criterion) {
    let mut group = c.benchmark_group("extract");
    for n in [20u64, 40, 60] {
        group.bench_with_input(BenchmarkId::new("maxpart", n), &n, |b, &n| {
            let sys = maxpart_system(false);
            b.iter(|| extract_coefficients(&sys, black_box(n)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("minpart", n), &n, |b, &n| {
            let sys = minpart_system();
            b.iter(|| extract_coefficients(&sys, black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn rewriting(c: &mut Criterion) {
    let sys = maxpart_system(false);
    c.bench_function("eval maxpart P(300)", |b| {
        b.iter(|| {
            let mut memo = Memo::new();
            eval_atom(&sys, Atom::Primary(black_box(300)), &mut memo).unwrap()
        })
    });
}

fn pairing(c: &mut Criterion) {
    c.bench_function("involution j=40", |b| {
        let mut domain = enumerate_bj(40);
        domain.extend(enumerate_bj(39));
        b.iter(|| {
            for code in &domain {
                black_box(involution(40, code).unwrap());
            }
        })
    });
}

criterion_group!(benches, extraction, rewriting, pairing);
criterion_main!(benches);
