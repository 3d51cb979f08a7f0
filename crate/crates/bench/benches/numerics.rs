use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use polesim::numkit::{eig, lu_solve, mat_exp, solve_lyapunov, sym_eigenvalues, Matrix};
use polesim_bench::pendulum_phi;

fn mat_8x8() -> Matrix {
    let mut seed = 0x0dd_ba11u64;
    let mut next = move || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    Matrix::from_vec(8, 8, (0..64).map(|_| next()).collect()).unwrap()
}

fn bench_numerics(c: &mut Criterion) {
    let phi = pendulum_phi();
    let q = Matrix::identity(4);
    c.bench_function("solve_lyapunov 4x4", |b| {
        b.iter(|| solve_lyapunov(black_box(&phi), black_box(&q)).unwrap())
    });

    c.bench_function("mat_exp 4x4 (pendulum loop, t = 0.01)", |b| {
        b.iter(|| mat_exp(black_box(&phi), black_box(0.01)).unwrap())
    });

    c.bench_function("eig 4x4", |b| b.iter(|| eig(black_box(&phi)).unwrap()));

    let m8 = mat_8x8();
    c.bench_function("eig 8x8", |b| b.iter(|| eig(black_box(&m8)).unwrap()));

    let sym = (&m8 + &m8.transpose()).scale(0.5);
    c.bench_function("sym_eigenvalues 8x8", |b| {
        b.iter(|| sym_eigenvalues(black_box(&sym)).unwrap())
    });

    let rhs = Matrix::identity(8);
    let mut well = m8.clone();
    for i in 0..8 {
        well[(i, i)] += 6.0;
    }
    c.bench_function("lu_solve 8x8 x 8 rhs", |b| {
        b.iter(|| lu_solve(black_box(&well), black_box(&rhs)).unwrap())
    });
}

criterion_group!(numerics, bench_numerics);
criterion_main!(numerics);
