//! Parallel vs sequential corpus throughput.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use slopebound_core::corpus::run_suite;
use slopebound_core::par::ExecMode;
use slopebound_core::report::CorpusConfig;

fn config(suite: &str, count: u32) -> CorpusConfig {
    CorpusConfig { suite: suite.into(), count, seed: 42, digits: 50, params: Default::default() }
}

fn bench_suites(c: &mut Criterion) {
    let cases: &[(&str, u32)] = &[
        ("bigirth-trivalent", 40),
        ("tree-length", 60),
        ("norms-minkowski", 120),
        ("bounds-calculus", 8),
    ];
    for &(suite, count) in cases {
        let mut group = c.benchmark_group(suite);
        group.sample_size(10);
        let mut cfg = config(suite, count);
        if suite == "bounds-calculus" {
            cfg.params.insert("lo".into(), 333.into());
            cfg.params.insert("hi".into(), 1333.into());
        }
        let sequential = cfg.clone();
        group.bench_function("sequential", |b| {
            b.iter_batched(
                || sequential.clone(),
                |cfg| run_suite(&cfg, ExecMode::Sequential).unwrap(),
                BatchSize::SmallInput,
            )
        });
        #[cfg(feature = "parallel")]
        {
            let parallel = cfg.clone();
            group.bench_function("parallel", |b| {
                b.iter_batched(
                    || parallel.clone(),
                    |cfg| run_suite(&cfg, ExecMode::Parallel).unwrap(),
                    BatchSize::SmallInput,
                )
            });
        }
        group.finish();
    }
}

criterion_group!(benches, bench_suites);
criterion_main!(benches);
