use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use torusgraph::coherence::{
    coherent_embedding, is_weighted_delaunay, oracle_weighted_delaunay, weighted_voronoi,
    weights_from_reciprocal,
};
use torusgraph::equilibrium::tutte_embed;
use torusgraph::{fixtures, Stress};
use torusgraph_bench::triangulation;

fn k7(c: &mut Criterion) {
    let g = fixtures::k7();
    let uniform = Stress::uniform(g.edge_count(), 1.0);
    c.bench_function("k7/tutte_embed", |b| {
        b.iter(|| tutte_embed(black_box(&g), &uniform, 0).unwrap())
    });
    c.bench_function("k7/coherent_embedding", |b| {
        b.iter(|| coherent_embedding(black_box(&g), &uniform, 0).unwrap())
    });
}

fn sites(c: &mut Criterion) {
    let mut group = c.benchmark_group("sites");
    for n in [8, 16, 32] {
        let (set, g) = triangulation(n, n as u64);
        let w = set.weights();
        let pair = weighted_voronoi(&g, &w).unwrap();
        group.bench_with_input(BenchmarkId::new("oracle", n), &set, |b, set| {
            b.iter(|| oracle_weighted_delaunay(black_box(set)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("is_weighted_delaunay", n), &g, |b, g| {
            b.iter(|| is_weighted_delaunay(black_box(g), &w).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("weights_from_reciprocal", n),
            &pair,
            |b, pair| b.iter(|| weights_from_reciprocal(black_box(pair)).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, k7, sites);
criterion_main!(benches);
