//! Timings of the main kernels at the sizes the reproduction suite uses.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cubicalforms_core::cubical::cubical_structure;
use cubicalforms_core::involution::twisted_compose_check;
use cubicalforms_core::qchar::{phi_exp, phi_product, Shift};
use cubicalforms_core::ssq::{Pages, Window};
use cubicalforms_core::weierstrass::{fgl, WeierstrassCurve};

fn formal_group(c: &mut Criterion) {
    let curve = WeierstrassCurve::general();
    c.bench_function("fgl general order 7", |b| b.iter(|| fgl(black_box(&curve), 7)));
}

fn cubical(c: &mut Criterion) {
    let mut g = c.benchmark_group("cubical");
    g.sample_size(10);
    let curve = WeierstrassCurve::general();
    g.bench_function("r_U general order 5", |b| b.iter(|| cubical_structure(black_box(&curve), 5).unwrap()));
    g.bench_function("r_U general order 6", |b| b.iter(|| cubical_structure(black_box(&curve), 6).unwrap()));
    g.finish();
}

fn involution(c: &mut Criterion) {
    c.bench_function("twisted composition order 10", |b| b.iter(|| twisted_compose_check(black_box(10))));
}

fn theta(c: &mut Criterion) {
    let mut g = c.benchmark_group("theta");
    g.bench_function("product form (10, 6)", |b| b.iter(|| phi_product(black_box(10), 6, Shift::None)));
    g.bench_function("exponential form (10, 6)", |b| b.iter(|| phi_exp(black_box(10), 6)));
    g.finish();
}

fn spectral_sequence(c: &mut Criterion) {
    let mut g = c.benchmark_group("ssq");
    g.sample_size(10);
    let small = Window { kmax: 24, filtration_max: 12, u2_max: 4 };
    g.bench_function("pages 24/12/4", |b| b.iter(|| Pages::compute(black_box(&small)).unwrap()));
    g.finish();
}

criterion_group!(benches, formal_group, cubical, involution, theta, spectral_sequence);
criterion_main!(benches);
