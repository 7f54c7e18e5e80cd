use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ballspec::hamming::{oracle_spectrum, InducedGraph, Limits};
use ballspec::krawtchouk::{first_root, KrawtchoukPoly, DEFAULT_TOL};
use ballspec::spectrum::full_spectrum;

fn closed_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("full_spectrum");
    for (n, r) in [(10u32, 5u32), (40, 20), (120, 60)] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("B({n},{r})")),
            &(n, r),
            |b, &(n, r)| b.iter(|| full_spectrum(black_box(n), 0, r).unwrap()),
        );
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let limits = Limits::default();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (n, r) in [(8u32, 4u32), (10, 3)] {
        let g = InducedGraph::build(n, 0, r, &limits).unwrap();
        group.bench_function(format!("B({n},{r})"), |b| {
            b.iter(|| oracle_spectrum(black_box(&g), false, &limits).unwrap())
        });
    }
    group.finish();
}

fn roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("first_root");
    group.bench_function("exact K_16^(64)", |b| {
        let p = KrawtchoukPoly::build(64, 16).unwrap();
        b.iter(|| p.first_root(DEFAULT_TOL).unwrap())
    });
    for n in [1_000i64, 100_000] {
        group.bench_function(format!("jacobi n={n}"), |b| {
            b.iter(|| first_root(black_box(n), n / 3, DEFAULT_TOL).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_form, oracle, roots);
criterion_main!(benches);
