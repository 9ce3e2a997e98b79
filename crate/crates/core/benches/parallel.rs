use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gemqm::gem::{storage_evolve, GemParams};
use gemqm::gfc::{propagate_via_transfer, GfcParams, Variant};
use gemqm::grid::Waveform;
use gemqm::EvalControl;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("one-thread", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn storage(c: &mut Criterion) {
    let p = GemParams::from_mu(0.8, 16.0 * PI);
    let a_in = Waveform::gaussian(-0.5, 0.25, -1.0, 0.0, 201).unwrap();
    let z: Vec<f64> = (0..=16).map(|k| k as f64 / 16.0).collect();
    let ctl = EvalControl::default();
    let mut g = c.benchmark_group("storage_evolve");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| storage_evolve(&p, &a_in, &z, &ctl).unwrap()))
        });
    }
    g.finish();
}

fn transfer(c: &mut Criterion) {
    let p = GfcParams::normalized(Variant::Discontinuous, 11, 600.0, 5.0, 2.0);
    let a_in = Waveform::gaussian(0.0, 50.0 / 255.0, -0.75, 0.75, 1501).unwrap();
    let mut g = c.benchmark_group("propagate_via_transfer");
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| propagate_via_transfer(&a_in, &p, 6.75).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, storage, transfer);
criterion_main!(benches);
