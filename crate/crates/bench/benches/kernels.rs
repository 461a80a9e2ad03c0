use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use numrad::orthkit::{bj_orthogonal_v, pencil_min, Norm};
use numrad::range::numerical_radius;
use numrad::Settings;
use numrad_bench::pair;
use std::hint::black_box;

const DIMS: [usize; 3] = [2, 3, 6];

fn radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("numerical_radius");
    for n in DIMS {
        let (a, _) = pair(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |bench, a| {
            bench.iter(|| numerical_radius(black_box(a)))
        });
    }
    group.finish();
}

fn pencil(c: &mut Criterion) {
    let settings = Settings::DEFAULT;
    let mut group = c.benchmark_group("pencil_min");
    group.sample_size(20);
    for n in DIMS {
        let (a, b) = pair(n, 2);
        for norm in [Norm::Operator, Norm::NumericalRadius] {
            let id = BenchmarkId::new(norm.as_str(), n);
            group.bench_with_input(id, &(&a, &b), |bench, (a, b)| {
                bench.iter(|| pencil_min(norm, black_box(a), black_box(b), &settings))
            });
        }
    }
    group.finish();
}

fn orthogonality(c: &mut Criterion) {
    let settings = Settings::DEFAULT;
    let mut group = c.benchmark_group("bj_orthogonal_v");
    group.sample_size(20);
    for n in DIMS {
        let (a, b) = pair(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(&a, &b), |bench, (a, b)| {
            bench.iter(|| bj_orthogonal_v(black_box(a), black_box(b), &settings))
        });
    }
    group.finish();
}

criterion_group!(benches, radius, pencil, orthogonality);
criterion_main!(benches);
