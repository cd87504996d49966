use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sparsefit::linalg::least_squares_solve;
use sparsefit::pattern::{banded_pattern, hard_coloring_pattern};
use sparsefit::random::gaussian_matrix;
use sparsefit::{
    column_intersection_graph, dense_oracle, fixed_sparse_recover, greedy_coloring,
    recover_from_sketch, ColoringOrder, MatVecOracle, RandomSeed,
};

fn bench_least_squares(c: &mut Criterion) {
    let mut group = c.benchmark_group("least_squares");
    for (m, s) in [(20, 5), (60, 15), (200, 50)] {
        let g = gaussian_matrix(m, s, RandomSeed::new(1, 0)).unwrap();
        let z = gaussian_matrix(m, 1, RandomSeed::new(2, 0))
            .unwrap()
            .into_vec();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{m}x{s}")),
            &(),
            |bench, _| bench.iter(|| least_squares_solve(black_box(&g), black_box(&z)).unwrap()),
        );
    }
    group.finish();
}

fn bench_recover_from_sketch(c: &mut Criterion) {
    let mut group = c.benchmark_group("recover_from_sketch");
    group.sample_size(20);
    for (d, b, m) in [(200, 2, 20), (1000, 2, 20), (1000, 5, 40)] {
        let pattern = Arc::new(banded_pattern(d, b));
        let a = gaussian_matrix(d, d, RandomSeed::new(3, 0)).unwrap();
        let g = gaussian_matrix(d, m, RandomSeed::new(4, 0)).unwrap();
        let z = dense_oracle(a).apply(&g).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("d{d}_b{b}_m{m}")),
            &(),
            |bench, _| {
                bench.iter(|| recover_from_sketch(black_box(&g), black_box(&z), &pattern).unwrap())
            },
        );
    }
    group.finish();
}

fn bench_fixed_sparse_recover(c: &mut Criterion) {
    let d = 300;
    let pattern = Arc::new(banded_pattern(d, 2));
    let oracle = dense_oracle(gaussian_matrix(d, d, RandomSeed::new(5, 0)).unwrap());
    c.bench_function("fixed_sparse_recover/d300_m20", |bench| {
        bench.iter(|| {
            fixed_sparse_recover(&oracle, &pattern, 20, RandomSeed::new(6, 0), false).unwrap()
        })
    });
}

fn bench_greedy_coloring(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_coloring");
    for k in [4, 8, 16] {
        let graph = column_intersection_graph(&hard_coloring_pattern(k));
        for order in [ColoringOrder::Natural, ColoringOrder::LargestDegreeFirst] {
            group.bench_with_input(
                BenchmarkId::new(format!("{order:?}"), format!("hard{k}")),
                &graph,
                |bench, graph| bench.iter(|| greedy_coloring(black_box(graph), order)),
            );
        }
    }
    let graph = column_intersection_graph(&banded_pattern(2000, 3));
    group.bench_function("Natural/banded2000_b3", |bench| {
        bench.iter(|| greedy_coloring(black_box(&graph), ColoringOrder::Natural))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_least_squares,
    bench_recover_from_sketch,
    bench_fixed_sparse_recover,
    bench_greedy_coloring
);
criterion_main!(benches);
