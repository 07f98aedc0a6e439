use bigalois_bench::workload;
use bigalois_core::fpalg::ideal_membership_bounded;
use bigalois_core::rewrite::{certify_confluence, count_irreducible};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn confluence(c: &mut Criterion) {
    let mut g = c.benchmark_group("confluence");
    for n in [2, 3, 4] {
        let w = workload(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &w, |b, w| b.iter(|| certify_confluence(&w.system)));
    }
    g.finish();
}

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_irreducible");
    for n in [2, 3, 4] {
        let w = workload(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &w, |b, w| b.iter(|| count_irreducible(&w.system, 8)));
    }
    g.finish();
}

fn membership(c: &mut Criterion) {
    let mut g = c.benchmark_group("membership");
    g.sample_size(10);
    for (n, bound) in [(2, 4), (3, 2)] {
        let w = workload(n);
        g.bench_with_input(BenchmarkId::new(format!("n{n}"), bound), &w, |b, w| {
            b.iter(|| ideal_membership_bounded(&w.presentation, &w.redundant, bound).expect("within caps"))
        });
    }
    g.finish();
}

criterion_group!(benches, confluence, counting, membership);
criterion_main!(benches);
