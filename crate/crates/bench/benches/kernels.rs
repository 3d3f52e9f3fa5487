//! Benchmarks for the hot numerical kernels: the dispersion integral, the
//! on-cut mode count, the smeared eddy density, and a Matsubara term.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use casimir_te::eddy::{mode_count_cut, mode_count_eddy_direct, BranchCutDensity};
use casimir_te::lifshitz::{dispersion, mode_count_cl};
use casimir_te::material::{Cavity, DrudeMaterial, Freq};
use casimir_te::numerics::{integrate_adaptive, Tol};
use casimir_te::thermo::free_energy_thermal_matsubara;
use num_complex::Complex64;

fn cavity() -> Cavity {
    Cavity::new(DrudeMaterial::natural(100.0, 1.0).unwrap(), 0.02).unwrap()
}

fn bench_quadrature(c: &mut Criterion) {
    c.bench_function("adaptive_quadrature_oscillatory", |b| {
        b.iter(|| {
            integrate_adaptive(
                |x: f64| (10.0 * x).sin() / (1.0 + x * x),
                0.0,
                black_box(3.0),
                Tol::rel(1e-10),
            )
            .unwrap()
        })
    });
}

fn bench_dispersion(c: &mut Criterion) {
    let cav = cavity();
    c.bench_function("dispersion_interior", |b| {
        b.iter(|| {
            dispersion(
                &cav,
                Freq::Interior(black_box(Complex64::new(0.3, 0.4))),
                Tol::rel(1e-10),
            )
            .unwrap()
        })
    });
    c.bench_function("mode_count_real_axis", |b| {
        b.iter(|| mode_count_cl(&cav, black_box(1e-3), Tol::rel(1e-9)).unwrap())
    });
}

fn bench_cut(c: &mut Criterion) {
    let cav = cavity();
    c.bench_function("mode_count_on_cut", |b| {
        b.iter(|| mode_count_cut(&cav, black_box(0.5), Tol::rel(1e-9)).unwrap())
    });
    c.bench_function("eddy_count_smeared_direct", |b| {
        b.iter(|| mode_count_eddy_direct(&cav, black_box(1e-2), Tol::rel(1e-7)).unwrap())
    });
    c.bench_function("branch_cut_density_build", |b| {
        b.iter(|| BranchCutDensity::build(&cav, 24, Tol::rel(1e-8)).unwrap())
    });
}

fn bench_matsubara(c: &mut Criterion) {
    let cav = Cavity::new(DrudeMaterial::natural(1.0, 1e-2).unwrap(), 2.0).unwrap();
    let t = 0.1 * cav.thouless();
    c.bench_function("free_energy_matsubara", |b| {
        b.iter(|| free_energy_thermal_matsubara(&cav, black_box(t), Tol::rel(1e-7)).unwrap())
    });
}

criterion_group!(
    kernels,
    bench_quadrature,
    bench_dispersion,
    bench_cut,
    bench_matsubara
);
criterion_main!(kernels);
