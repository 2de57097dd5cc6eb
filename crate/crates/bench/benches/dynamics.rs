use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use saari_core::dynamics::{fixture_orbit, integrate_cartesian, integrate_reduced, ReducedInitialData};
use saari_core::IntegratorConfig;

fn dynamics(c: &mut Criterion) {
    let start = fixture_orbit("generic_perturbed").unwrap().config;
    let cfg = IntegratorConfig::default().with_span(1.0).with_sampling(0.01);
    c.bench_function("cartesian generic_perturbed t=1", |b| {
        b.iter(|| integrate_cartesian(black_box(&start), &cfg).unwrap())
    });
    let init = ReducedInitialData::from_config(&start).unwrap();
    c.bench_function("reduced generic_perturbed t=1", |b| {
        b.iter(|| integrate_reduced(black_box(&init), &cfg).unwrap())
    });
}

criterion_group!(benches, dynamics);
criterion_main!(benches);
