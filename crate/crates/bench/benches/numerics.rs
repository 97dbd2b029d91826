use criterion::{black_box, criterion_group, criterion_main, Criterion};
use karamata_bench::holder_entropic_spec;
use karamata_core::numerics::{integrate, lambert_w0, lambert_wm1};
use karamata_core::rates::RateBoundFn;
use karamata_core::{Bracket, Tolerance};

fn lambert(c: &mut Criterion) {
    c.bench_function("lambert_w0 grid", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for j in 0..100 {
                acc += lambert_w0(black_box(j as f64 * 0.37)).unwrap();
            }
            acc
        })
    });
    c.bench_function("lambert_wm1 grid", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for j in 1..100 {
                acc += lambert_wm1(black_box(-0.0036 * j as f64)).unwrap();
            }
            acc
        })
    });
}

fn quadrature(c: &mut Criterion) {
    let br = Bracket::new(1e-8, 1.0).unwrap();
    c.bench_function("integrate sqrt(t) ln t", |b| {
        b.iter(|| integrate(|t: f64| t.sqrt() * t.ln(), black_box(br), Tolerance::default()).unwrap())
    });
}

fn rate_bound(c: &mut Criterion) {
    let spec = holder_entropic_spec();
    c.bench_function("rate bound, fresh table to k = 1e6", |b| {
        b.iter(|| {
            let rb = RateBoundFn::new(&spec, 1e-4).unwrap();
            rb.bound(black_box(1_000_000)).unwrap()
        })
    });
    let rb = RateBoundFn::new(&spec, 1e-4).unwrap();
    rb.bound(1_000_000).unwrap();
    c.bench_function("rate bound, warm table", |b| {
        b.iter(|| rb.bound(black_box(123_457)).unwrap())
    });
}

criterion_group!(benches, lambert, quadrature, rate_bound);
criterion_main!(benches);
