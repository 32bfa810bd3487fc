use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use siegelcf::cf::{expand, lagrange_expansion, CertifyConfig};
use siegelcf::gaussian::{ComplexBall, Decision, GaussianInteger, GaussianRational};
use siegelcf::lattice::{nearest_integer, DomainConfig};
use siegelcf::numfield::{fixed_point_of, RootSelector};
use siegelcf::siegel::{IntegerPoint, QPoint};
use siegelcf::unitary::{decompose_power4, is_root_of_unity, UnitaryMatrix};

fn gq(re: i64, im: i64, den: i64) -> GaussianRational {
    GaussianRational::new(GaussianInteger::from_i64(re, im), den).unwrap()
}

fn sample_matrix() -> UnitaryMatrix {
    let g1 = IntegerPoint::from_i64(2, 0, 1).unwrap();
    let g2 = IntegerPoint::from_i64(1, 1, -2).unwrap();
    UnitaryMatrix::j()
        .mul(&UnitaryMatrix::translation(&g1))
        .mul(&UnitaryMatrix::j())
        .mul(&UnitaryMatrix::translation(&g2))
}

fn bench_gaussian(c: &mut Criterion) {
    let a = gq(123456789, -987654321, 1000003);
    let b = gq(-555444333, 222111000, 999983);
    c.bench_function("gaussian_rational_mul", |bch| {
        bch.iter(|| black_box(&a) * black_box(&b))
    });
    let ball = ComplexBall::from_rational(&a, 256);
    c.bench_function("ball_mul_256", |bch| {
        bch.iter(|| black_box(&ball).mul(black_box(&ball)))
    });
}

fn bench_lattice(c: &mut Criterion) {
    let cfg = DomainConfig::default();
    // |u|^2 = 1378970/375769, so re(v) = 689485/375769
    let h = QPoint::from_rationals(gq(1037, -551, 613), gq(689485, 99731, 375769)).unwrap();
    c.bench_function("nearest_integer_rational", |bch| {
        bch.iter(|| nearest_integer(black_box(&h), &cfg).unwrap())
    });
}

fn bench_expansion(c: &mut Criterion) {
    let cfg = DomainConfig::default();
    let ctx = Decision::default();
    let m = sample_matrix();
    let fp = fixed_point_of(&m, RootSelector::Auto, &ctx).unwrap();
    c.bench_function("gauss_steps_cubic_x10", |bch| {
        bch.iter(|| expand(black_box(&fp.point), 10, &cfg).unwrap())
    });
    let cert = CertifyConfig::default();
    c.bench_function("lagrange_expansion", |bch| {
        bch.iter(|| lagrange_expansion(black_box(&m), &fp.point, &cfg, &cert).unwrap())
    });
}

fn bench_unitary(c: &mut Criterion) {
    let cfg = DomainConfig::default();
    let m = sample_matrix();
    c.bench_function("decompose_power4", |bch| {
        bch.iter(|| decompose_power4(black_box(&m), &cfg).unwrap())
    });
    c.bench_function("torsion_sweep", |bch| {
        bch.iter(|| is_root_of_unity(black_box(&m)))
    });
}

criterion_group!(
    benches,
    bench_gaussian,
    bench_lattice,
    bench_expansion,
    bench_unitary
);
criterion_main!(benches);
