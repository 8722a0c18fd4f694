use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plab_core::engines::EngineKind;

fn engines(c: &mut Criterion) {
    let mut group = c.benchmark_group("p(n)");
    group.sample_size(20);
    for n in [200usize, 1000] {
        for kind in EngineKind::ALL {
            // the composite engines keep quadratic tables; skip them at the larger size
            if n > 200
                && matches!(
                    kind,
                    EngineKind::MinPart | EngineKind::Bounded | EngineKind::MaxPart
                )
            {
                continue;
            }
            group.bench_with_input(BenchmarkId::new(kind.name(), n), &n, |b, &n| {
                b.iter(|| kind.engine().count(black_box(n)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, engines);
criterion_main!(benches);
