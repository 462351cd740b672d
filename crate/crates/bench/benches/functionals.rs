use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lpsteiner::bodies::{make_ellipsoid, make_rounded_cube};
use lpsteiner::combinatorics::{c_npk, rational};
use lpsteiner::steiner::{asp_boundary, asp_sphere, series_asp, v_vector, w_table};
use lpsteiner::{Accuracy, PValue};

fn combinatorics(c: &mut Criterion) {
    let p = rational(7, 2);
    c.bench_function("c_npk n=6 k=12", |b| b.iter(|| c_npk(6, black_box(&p), 12).unwrap()));
}

fn integrals(c: &mut Criterion) {
    let acc = Accuracy::default();
    let ellipse = make_ellipsoid(&[1.0, 1.2]).unwrap();
    let ellipsoid = make_ellipsoid(&[1.0, 1.2, 0.8]).unwrap();
    let cube = make_rounded_cube(3, 4).unwrap();
    let p = PValue::Finite(1.0);
    c.bench_function("as_1 ellipse (sphere form)", |b| b.iter(|| asp_sphere(&ellipse, p, &acc).unwrap()));
    c.bench_function("as_1 ellipsoid (boundary form)", |b| b.iter(|| asp_boundary(&ellipsoid, p, &acc).unwrap()));
    c.bench_function("W table m<=3 k=3 ellipsoid", |b| b.iter(|| w_table(&ellipsoid, p, 3, 3, &acc).unwrap()));
    c.bench_function("V vector k<=16 rounded cube", |b| b.iter(|| v_vector(&cube, p, 16, 0.1, &acc).unwrap()));
}

fn series(c: &mut Criterion) {
    let acc = Accuracy::default();
    let ellipsoid = make_ellipsoid(&[1.0, 1.2, 0.8]).unwrap();
    let mut g = c.benchmark_group("series");
    g.sample_size(10);
    g.bench_function("as_2 series ellipsoid", |b| {
        b.iter(|| series_asp(&ellipsoid, PValue::Finite(2.0), 400, 1e-14, &acc).unwrap())
    });
    g.finish();
}

criterion_group!(benches, combinatorics, integrals, series);
criterion_main!(benches);
