use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cvsteer::bell::{BellOptions, BellSettings, ParityEvaluator};
use cvsteer::entropy::GridOptions;
use cvsteer::steering::entropic_test_family;
use cvsteer::{QuadratureLabel, StateFamily};
use cvsteer_bench::fixtures;

fn polygauss(c: &mut Criterion) {
    let mut g = c.benchmark_group("polygauss");
    for (name, f) in fixtures() {
        let w = f.wigner().unwrap();
        g.bench_with_input(BenchmarkId::new("integrate", name), &w, |b, w| b.iter(|| w.integrate().unwrap()));
        g.bench_with_input(BenchmarkId::new("marginal_xy", name), &w, |b, w| {
            b.iter(|| w.marginalize(&[QuadratureLabel::X, QuadratureLabel::Y]).unwrap())
        });
    }
    g.bench_function("construct_sub2", |b| {
        b.iter(|| StateFamily::PhotonSubtracted { r: black_box(1.0), order: 2, k: 1 }.wigner().unwrap())
    });
    g.finish();
}

fn parity(c: &mut Criterion) {
    let mut g = c.benchmark_group("bell");
    let s = BellSettings::real(0.05, -0.3, -0.05, 0.3);
    for (name, f) in fixtures() {
        let ev = ParityEvaluator::new(&f.wigner().unwrap()).unwrap();
        g.bench_function(BenchmarkId::new("bell_sum", name), |b| b.iter(|| ev.bell_sum(black_box(&s))));
    }
    g.sample_size(10);
    g.bench_function("optimize_lg1_8_starts", |b| {
        let opts = BellOptions { starts: 8, ..Default::default() };
        b.iter(|| cvsteer::bell::bell_optimize(&StateFamily::Lg { n: 1, m: 0 }, &opts).unwrap())
    });
    g.finish();
}

fn entropy(c: &mut Criterion) {
    let mut g = c.benchmark_group("entropy");
    g.sample_size(10);
    for (name, f) in fixtures() {
        g.bench_with_input(BenchmarkId::new("entropic_test", name), &f, |b, f| {
            b.iter(|| entropic_test_family(f, &GridOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, polygauss, parity, entropy);
criterion_main!(benches);
