//! Benchmarks for the hot paths: series arithmetic, certified grid
//! sweeps, the plant metric, and Neumann inversion.
//!
//! Run with `cargo bench -p chordal-bench`. Grid sizes are chosen so a
//! full run stays around a minute; the certified-sweep cases use the
//! same kernels as the default CLI grid, just smaller.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chordal_core::robustness::bidisc;
use chordal_core::sphere::{chordal, ExtendedComplex};
use chordal_core::{
    kappa, margin, neumann_inverse, sup_norm_certified, PolydiscGrid, Series,
};

fn random_series(rng: &mut ChaCha8Rng, nvars: usize, terms: usize, degree: u32) -> Series {
    let entries: Vec<(Vec<u32>, Complex64)> = (0..terms)
        .map(|_| {
            let exps = (0..nvars).map(|_| rng.random_range(0..=degree)).collect();
            let c = Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
            (exps, c)
        })
        .collect();
    Series::from_terms(nvars, entries).unwrap()
}

fn bench_series_mul(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("series_mul");
    for terms in [8usize, 32, 128] {
        let a = random_series(&mut rng, 2, terms, 8);
        let b = random_series(&mut rng, 2, terms, 8);
        group.bench_with_input(BenchmarkId::from_parameter(terms), &terms, |bench, _| {
            bench.iter(|| black_box(a.mul(&b).unwrap()));
        });
    }
    group.finish();
}

fn bench_sup_norm(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_series(&mut rng, 2, 16, 6);
    let mut group = c.benchmark_group("sup_norm_certified");
    for (radial, angular) in [(5usize, 12usize), (11, 36), (21, 126)] {
        let grid = PolydiscGrid::new(2, radial, angular).unwrap();
        let id = format!("{radial}x{angular}");
        group.bench_with_input(BenchmarkId::from_parameter(id), &grid, |bench, grid| {
            bench.iter(|| black_box(sup_norm_certified(&f, grid).unwrap()));
        });
    }
    group.finish();
}

fn bench_plant_metric(c: &mut Criterion) {
    let mut group = c.benchmark_group("kappa");
    group.sample_size(20);
    for (radial, angular) in [(5usize, 12usize), (11, 36)] {
        let grid = PolydiscGrid::new(2, radial, angular).unwrap();
        let p0 = bidisc::nominal_plant(&grid).unwrap();
        let pa = bidisc::shifted_plant(0.1, &grid).unwrap();
        let id = format!("{radial}x{angular}");
        group.bench_with_input(BenchmarkId::from_parameter(id), &grid, |bench, grid| {
            bench.iter(|| black_box(kappa(&pa, &p0, grid).unwrap()));
        });
    }
    group.finish();
}

fn bench_margin(c: &mut Criterion) {
    let grid = PolydiscGrid::new(2, 11, 36).unwrap();
    let p0 = bidisc::nominal_plant(&grid).unwrap();
    let ctrl = bidisc::controller();
    let mut group = c.benchmark_group("margin");
    group.sample_size(20);
    group.bench_function("11x36", |bench| {
        bench.iter(|| black_box(margin(&p0, &ctrl, &grid).unwrap()));
    });
    group.finish();
}

fn bench_neumann(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let e = random_series(&mut rng, 2, 6, 3);
    let f = Series::one(2)
        .add(&e.scale(Complex64::new(0.4 / e.l1_norm(), 0.0)))
        .unwrap();
    c.bench_function("neumann_inverse_48", |bench| {
        bench.iter(|| black_box(neumann_inverse(&f, 48).unwrap()));
    });
}

fn bench_chordal(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pairs: Vec<(ExtendedComplex, ExtendedComplex)> = (0..1024)
        .map(|_| {
            let z = |rng: &mut ChaCha8Rng| {
                ExtendedComplex::new(Complex64::new(
                    rng.random::<f64>() * 10.0 - 5.0,
                    rng.random::<f64>() * 10.0 - 5.0,
                ))
            };
            (z(&mut rng), z(&mut rng))
        })
        .collect();
    c.bench_function("chordal_1024_pairs", |bench| {
        bench.iter(|| {
            let mut acc = 0.0;
            for &(a, b) in &pairs {
                acc += chordal(a, b);
            }
            black_box(acc)
        });
    });
}

criterion_group!(
    benches,
    bench_series_mul,
    bench_sup_norm,
    bench_plant_metric,
    bench_margin,
    bench_neumann,
    bench_chordal
);
criterion_main!(benches);
