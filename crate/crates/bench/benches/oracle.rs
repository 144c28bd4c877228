use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kmdc_core::{compare_with_orbit, enumerate, TruncatedStar};

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    let t = TruncatedStar::new(3, 3).unwrap();
    g.bench_function("enumerate N=3 M=3 length 6", |b| {
        b.iter(|| enumerate(&t, black_box(6), 1_000_000, |_, _| {}).unwrap())
    });
    g.bench_function("compare N=3 M=3 length 6", |b| {
        b.iter(|| compare_with_orbit(&t, black_box(6), 1_000_000).unwrap())
    });
    g.finish();
}

criterion_group!(benches, oracle);
criterion_main!(benches);
