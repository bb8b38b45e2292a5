use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use loosepath::experiments::{run_trials, run_trials_sequential, Backend, ExperimentConfig, Measure};
use loosepath::hypergraph::sample_explicit;
use loosepath::paths::{exact_lmax, greedy_lazy};
use loosepath::theory::expected_extension;
use loosepath::RngSeed;

fn trial_pool(c: &mut Criterion) {
    let mut g = c.benchmark_group("trials");
    g.sample_size(10);
    let cases = [
        ("explicit_lmax", ExperimentConfig::new(600, 3, 0.002, 32, Backend::Explicit, Measure::LmaxExact)),
        ("lazy_greedy", ExperimentConfig::new(1_000_000, 3, 0.5, 64, Backend::Lazy, Measure::GreedyK)),
    ];
    for (name, cfg) in cases {
        g.bench_with_input(BenchmarkId::new("sequential", name), &cfg, |b, cfg| {
            b.iter(|| run_trials_sequential(black_box(cfg)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("parallel", name), &cfg, |b, cfg| {
            b.iter(|| run_trials(black_box(cfg)).unwrap())
        });
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let h = sample_explicit(5000, 3, 2e-4, RngSeed::new(1, 0)).unwrap();
    c.bench_function("exact_lmax n=5000 r=3", |b| b.iter(|| exact_lmax(black_box(&h))));
    c.bench_function("greedy_lazy n=1e6 r=4 p=0.3", |b| {
        b.iter(|| greedy_lazy(1_000_000, 4, black_box(0.3), RngSeed::new(2, 0)).unwrap())
    });
    c.bench_function("expected_extension r=5 p=1e-3", |b| {
        b.iter(|| expected_extension(5, black_box(1e-3), 1e-12))
    });
}

criterion_group!(benches, trial_pool, kernels);
criterion_main!(benches);
