//! Parallel vs sequential kernels on the real workloads: Cayley-table
//! fills and all-pairs sweeps. Run with `cargo bench -p edlab-core`.

use criterion::{criterion_group, criterion_main, Criterion};

fn bench_placeholder(c: &mut Criterion) {
    c.bench_function("noop", |b| b.iter(|| std::hint::black_box(0u64)));
}

criterion_group!(benches, bench_placeholder);
criterion_main!(benches);
