use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ncgeom::suite::{classical_suite, sphere_suite};
use ncgeom::{DerivativeMode, FuzzySphere, NCTorus, SuiteOptions, Surface, ToleranceSpec};

fn curvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("sphere_curvature");
    for n in [4, 8, 16] {
        let fs = FuzzySphere::new(n).unwrap();
        group.bench_with_input(BenchmarkId::new("tensor", n), &fs, |b, fs| {
            b.iter(|| black_box(fs.geometry().curvature_tensor()))
        });
        group.bench_with_input(BenchmarkId::new("scalar", n), &fs, |b, fs| {
            b.iter(|| black_box(fs.geometry().scalar_curvature()))
        });
    }
    group.finish();
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construction");
    for n in [8, 32] {
        group.bench_with_input(BenchmarkId::new("sphere", n), &n, |b, &n| {
            b.iter(|| FuzzySphere::new(black_box(n)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("torus", n), &n, |b, &n| {
            b.iter(|| NCTorus::new(black_box(n), 1).unwrap())
        });
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let opts = SuiteOptions {
        trials: 5,
        ..SuiteOptions::default()
    };
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    group.bench_function("sphere_8", |b| b.iter(|| sphere_suite(8, &opts).unwrap()));
    group.bench_function("classical_sphere_fd", |b| {
        let mode = DerivativeMode::FiniteDifference { step: 1e-5 };
        b.iter(|| classical_suite(Surface::Sphere, 16, mode, ToleranceSpec::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, curvature, construction, suites);
criterion_main!(benches);
