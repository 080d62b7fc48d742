use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use sphericalis::engine::{omega_schur_with, omega_sum_with, DEFAULT_SUBSET_CAP};
use sphericalis::fixtures::{lambda_grid, load_datum};
use sphericalis::padic::{fourier_k2_with, Coset, StepFunction};
use sphericalis::par::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn omega(c: &mut Criterion) {
    let mut g = c.benchmark_group("omega");
    for name in ["triple-product", "shalika-gl4", "group-a2"] {
        let d = load_datum(name).unwrap();
        let grid = lambda_grid(&d, 5);
        for (label, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(format!("sum/{label}"), name), &grid, |b, grid| {
                b.iter(|| {
                    for l in grid {
                        black_box(omega_sum_with(&d, l, exec).unwrap());
                    }
                })
            });
            g.bench_with_input(BenchmarkId::new(format!("schur/{label}"), name), &grid, |b, grid| {
                b.iter(|| {
                    for l in grid {
                        black_box(omega_schur_with(&d, l, exec, DEFAULT_SUBSET_CAP).unwrap());
                    }
                })
            });
        }
    }
    g.finish();
}

fn lambda_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("lambda_sweep");
    let d = load_datum("gp-so3-so4").unwrap();
    let grid = lambda_grid(&d, 5);
    for (label, exec) in MODES {
        g.bench_function(label, |b| {
            b.iter(|| {
                black_box(exec.map(&grid, |l| {
                    omega_schur_with(&d, l, Exec::Sequential, DEFAULT_SUBSET_CAP).unwrap()
                }))
            })
        });
    }
    g.finish();
}

fn padic_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("fourier_k2");
    g.sample_size(10);
    let f = StepFunction::<Complex64>::indicator(3, 2, 2, &[Coset::ball(1), Coset::ball(0)]).unwrap();
    for (label, exec) in MODES {
        g.bench_function(label, |b| b.iter(|| black_box(fourier_k2_with(&f, exec).unwrap())));
    }
    g.finish();
}

criterion_group!(benches, omega, lambda_sweep, padic_grid);
criterion_main!(benches);
