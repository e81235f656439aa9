use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geoflow_core::building::{Building, DEFAULT_BUDGET};
use geoflow_core::exec::Exec;
use geoflow_core::shift::{dp_f_with, dp_g_with};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (q, n) in [(2u32, 6usize), (3, 3)] {
        let b = Building::pgl3(q).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(
                BenchmarkId::new(name, format!("q{q}_n{n}")),
                &n,
                |bench, &n| {
                    bench.iter(|| b.oracle_counts(black_box(n), DEFAULT_BUDGET, exec).unwrap())
                },
            );
        }
    }
    group.finish();
}

fn dp(c: &mut Criterion) {
    let mut group = c.benchmark_group("dp");
    for (q, n) in [(2u64, 30usize), (5, 30)] {
        for (name, exec) in MODES {
            group.bench_with_input(
                BenchmarkId::new(format!("g_{name}"), format!("q{q}_n{n}")),
                &n,
                |bench, &n| bench.iter(|| dp_g_with(q, black_box(n), exec)),
            );
            group.bench_with_input(
                BenchmarkId::new(format!("f_{name}"), format!("q{q}_n{n}")),
                &n,
                |bench, &n| bench.iter(|| dp_f_with(q, black_box(n), exec)),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, oracle, dp);
criterion_main!(benches);
