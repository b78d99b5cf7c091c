use std::hint::black_box;

use clgenus::cbi;
use clgenus::certify;
use clgenus::genus::{self, IndexedChain, SearchOptions};
use clgenus_bench::{alternating_pair, commutator_power};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn pairing_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_orbits");
    for n in 1..=3 {
        let chain = IndexedChain::new(&commutator_power(n));
        group.bench_with_input(BenchmarkId::new("serial", n), &chain, |b, chain| {
            b.iter(|| genus::search(black_box(chain), &SearchOptions::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &chain, |b, chain| {
            b.iter(|| genus::search(black_box(chain), &SearchOptions::parallel()).unwrap())
        });
    }
    group.finish();
}

fn distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("d_cbi");
    for n in [3, 5, 6] {
        let (v, w) = alternating_pair(n);
        group.bench_with_input(BenchmarkId::new("pairing", n), &(v.clone(), w.clone()), |b, (v, w)| {
            b.iter(|| cbi::d_cbi(black_box(v), black_box(w)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("witness", n), &(v.clone(), w.clone()), |b, (v, w)| {
            b.iter(|| cbi::extract_sequence(black_box(v), black_box(w)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oracle_bfs", n), &(v, w), |b, (v, w)| {
            b.iter(|| cbi::oracle_bfs(black_box(v), black_box(w), None).unwrap())
        });
    }
    group.finish();
}

fn nu_sweep(c: &mut Criterion) {
    c.bench_function("exhaustive_delta_check", |b| b.iter(certify::exhaustive_delta_check));
}

criterion_group!(benches, pairing_search, distance, nu_sweep);
criterion_main!(benches);
