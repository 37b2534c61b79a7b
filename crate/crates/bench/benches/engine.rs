use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use m4d_core::gallery;
use m4d_core::projection::ProjectionMode;
use m4d_core::tessellate::project_grid;
use m4d_core::{sample, verify, PerspectiveConfig, Quaternion};

fn quaternion(c: &mut Criterion) {
    let a = Quaternion::new(0.3, -1.2, 0.7, 2.0).unwrap();
    let b = Quaternion::new(-0.5, 0.25, 1.5, -0.75).unwrap();
    c.bench_function("quat/mul", |bch| {
        bch.iter(|| black_box(a).mul(black_box(b)))
    });
    c.bench_function("quat/divide_left", |bch| {
        bch.iter(|| black_box(a).divide_left(black_box(b)))
    });
}

fn sampling(c: &mut Criterion) {
    let torus = gallery::get("clifford-prod").unwrap().scene().unwrap();
    let d = torus.set("d").unwrap().clone();
    c.bench_function("sample/clifford-prod 64x64", |b| {
        b.iter(|| sample(&d, &[64, 64]).unwrap())
    });
    let hopf = gallery::get("hopf-3sphere").unwrap().scene().unwrap();
    let s3 = hopf.set("s3").unwrap().clone();
    c.bench_function("sample/hopf 32^3", |b| {
        b.iter(|| sample(&s3, &[32, 32, 32]).unwrap())
    });
}

fn projection(c: &mut Criterion) {
    let scene = gallery::get("pluecker").unwrap().scene().unwrap();
    let g = sample(scene.set("c").unwrap(), &[64, 64]).unwrap();
    let persp = ProjectionMode::Perspective(PerspectiveConfig::new(3.0).unwrap());
    c.bench_function("project/dop 64x64", |b| {
        b.iter(|| project_grid(&g, &ProjectionMode::Dop, None))
    });
    c.bench_function("project/perspective 64x64", |b| {
        b.iter(|| project_grid(&g, &persp, None))
    });
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("clifford-rotation", |b| {
        b.iter(|| verify::run_entry("clifford-rotation").unwrap())
    });
    group.bench_function("quad-cone", |b| {
        b.iter(|| verify::run_entry("quad-cone").unwrap())
    });
    group.finish();
}

criterion_group!(benches, quaternion, sampling, projection, verification);
criterion_main!(benches);
