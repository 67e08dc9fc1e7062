use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DVector;
use std::hint::black_box;
use tomoslice::bodies::random::{random_ellipsoid, random_simplex};
use tomoslice::bodies::{seeded_rng, Body, Direction, Polytope};
use tomoslice::detect::is_ellipsoid;
use tomoslice::radon::moment;
use tomoslice::sections::{profile, section_volume};

fn bodies() -> Vec<(&'static str, Body)> {
    let mut rng = seeded_rng(7);
    vec![
        ("ellipsoid3", random_ellipsoid(3, &mut rng).into()),
        ("ellipsoid6", random_ellipsoid(6, &mut rng).into()),
        ("cube3", Polytope::cube(3, 1.0).unwrap().into()),
        ("simplex3", random_simplex(3, &mut rng).into()),
    ]
}

fn direction(n: usize) -> Direction {
    Direction::normalized(DVector::from_fn(n, |i, _| 1.0 + 0.3 * i as f64)).unwrap()
}

fn bench_section_volume(c: &mut Criterion) {
    let mut group = c.benchmark_group("section_volume");
    for (name, body) in bodies() {
        let xi = direction(body.dim());
        group.bench_with_input(BenchmarkId::from_parameter(name), &body, |b, body| {
            b.iter(|| section_volume(black_box(body), &xi, black_box(0.1)).unwrap())
        });
    }
    group.finish();
}

fn bench_moment(c: &mut Criterion) {
    let mut group = c.benchmark_group("moment_k2");
    for (name, body) in bodies() {
        let xi = direction(body.dim());
        group.bench_with_input(BenchmarkId::from_parameter(name), &body, |b, body| {
            b.iter(|| moment(black_box(body), &xi, 2, 64).unwrap())
        });
    }
    group.finish();
}

fn bench_profile(c: &mut Criterion) {
    let mut group = c.benchmark_group("profile_64");
    for (name, body) in bodies() {
        let xi = direction(body.dim());
        group.bench_with_input(BenchmarkId::from_parameter(name), &body, |b, body| {
            b.iter(|| profile(black_box(body), &xi, 64, 0.02).unwrap())
        });
    }
    group.finish();
}

fn bench_is_ellipsoid(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_ellipsoid_200");
    for (name, body) in bodies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &body, |b, body| {
            b.iter(|| is_ellipsoid(black_box(body), 1e-8, 1e-8, 200, 42).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_section_volume, bench_moment, bench_profile, bench_is_ellipsoid);
criterion_main!(benches);
