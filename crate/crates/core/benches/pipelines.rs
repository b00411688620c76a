//! Benchmarks for the batch-heavy pipelines. The same suite runs under the
//! default `parallel` feature and under `--no-default-features`; compare the
//! two with criterion baselines:
//!
//!   cargo bench -p novmorse -- --save-baseline parallel
//!   cargo bench -p novmorse --no-default-features -- --baseline parallel

use criterion::{criterion_group, criterion_main, Criterion};

use novmorse::cocycle::CellularCocycle;
use novmorse::complex::{Cell, CellComplex};
use novmorse::homology::{homology, Coefficients};
use novmorse::morse::verify_inequality_equivalence;
use novmorse::twisted::novikov_numbers;

/// n x n grid torus: n^2 vertices, 2n^2 edges, n^2 square faces.
fn grid_torus(n: usize) -> CellComplex {
    let mut cells = Vec::new();
    let v = |i: usize, j: usize| format!("v{}_{}", i % n, j % n);
    let h = |i: usize, j: usize| format!("h{}_{}", i % n, j % n);
    let ve = |i: usize, j: usize| format!("u{}_{}", i % n, j % n);
    for i in 0..n {
        for j in 0..n {
            cells.push(Cell {
                id: v(i, j),
                dim: 0,
                boundary: vec![],
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            cells.push(Cell {
                id: h(i, j),
                dim: 1,
                boundary: vec![(v(i + 1, j), 1), (v(i, j), -1)],
            });
            cells.push(Cell {
                id: ve(i, j),
                dim: 1,
                boundary: vec![(v(i, j + 1), 1), (v(i, j), -1)],
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            cells.push(Cell {
                id: format!("f{i}_{j}"),
                dim: 2,
                boundary: vec![
                    (h(i, j), 1),
                    (ve(i + 1, j), 1),
                    (h(i, j + 1), -1),
                    (ve(i, j), -1),
                ],
            });
        }
    }
    CellComplex::new(&format!("grid-torus-{n}"), cells).expect("grid torus")
}

/// Class dual to the seam i = n-1 -> 0.
fn seam_class(n: usize) -> CellularCocycle {
    let values = (0..n)
        .map(|j| (format!("h{}_{}", n - 1, j), vec![1]))
        .collect();
    CellularCocycle { s: 1, values }
}

fn bench_homology(c: &mut Criterion) {
    let torus = grid_torus(8);
    let mut group = c.benchmark_group("homology");
    group.sample_size(10);
    group.bench_function("grid_torus_8_over_z", |b| {
        b.iter(|| homology(&torus, Coefficients::Z).unwrap())
    });
    group.bench_function("grid_torus_8_mod_5", |b| {
        b.iter(|| homology(&torus, Coefficients::Zp(5)).unwrap())
    });
    group.finish();
}

fn bench_novikov(c: &mut Criterion) {
    let torus = grid_torus(6);
    let alpha = seam_class(6);
    let mut group = c.benchmark_group("novikov");
    group.sample_size(10);
    group.bench_function("grid_torus_6_trials_8", |b| {
        b.iter(|| novikov_numbers(&torus, &alpha, None, 42, 8).unwrap())
    });
    group.finish();
}

fn bench_equivalence_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("inequality_equivalence");
    group.sample_size(10);
    group.bench_function("deg4_coeff2", |b| {
        b.iter(|| verify_inequality_equivalence(4, 2).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_homology,
    bench_novikov,
    bench_equivalence_sweep
);
criterion_main!(benches);
