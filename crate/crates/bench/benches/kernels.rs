use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use hyperlocus_core::atlas::{gen_a4k1, gen_dk_points, gen_penrose20, DkVariant};
use hyperlocus_core::certificate::removal_audit;
use hyperlocus_core::interpolation::{locus_matrix, sample_affine, zero_locus_test};
use hyperlocus_core::linalg::{determinant, rank};
use hyperlocus_core::locus::symbolic_locus;
use hyperlocus_core::{PrimeField, DEFAULT_BUDGET, DEFAULT_PRIME};

fn linear_algebra(c: &mut Criterion) {
    let f = PrimeField::new(DEFAULT_PRIME).unwrap();
    let cfg = gen_dk_points(DkVariant::Nine).unwrap().configuration().unwrap().unwrap();
    let ps = cfg.point_set(&f).unwrap();
    let b = sample_affine(&f, 2, 1, 0);
    let m = locus_matrix(&ps, 4, 3, &b);
    c.bench_function("determinant 15x15 mod p", |bch| bch.iter(|| determinant(&f, black_box(&m)).unwrap()));
    c.bench_function("rank 15x15 mod p", |bch| bch.iter(|| rank(&f, black_box(&m))));
}

fn zero_test(c: &mut Criterion) {
    let rec = gen_a4k1(2, None).unwrap();
    let p = rec.field.modulus().unwrap();
    let f = PrimeField::new(p).unwrap();
    let ps = rec.configuration().unwrap().unwrap().point_set(&f).unwrap();
    c.bench_function("zero test, nine points, 20 trials", |bch| {
        bch.iter(|| zero_locus_test(black_box(&ps), 4, 3, 20, 0).unwrap())
    });
}

fn locus_expansion(c: &mut Criterion) {
    let f = PrimeField::new(DEFAULT_PRIME).unwrap();
    let seven = gen_dk_points(DkVariant::Seven).unwrap().configuration().unwrap().unwrap();
    let ps7 = seven.point_set(&f).unwrap();
    let nine = gen_dk_points(DkVariant::Nine).unwrap().configuration().unwrap().unwrap();
    let ps9 = nine.point_set(&f).unwrap();
    let mut g = c.benchmark_group("locus expansion");
    g.sample_size(10);
    g.bench_function("seven points, d=3 m=2", |bch| {
        bch.iter(|| symbolic_locus(black_box(&ps7), 3, 2, DEFAULT_BUDGET).unwrap())
    });
    g.bench_function("nine points, d=4 m=3", |bch| {
        bch.iter(|| symbolic_locus(black_box(&ps9), 4, 3, DEFAULT_BUDGET).unwrap())
    });
    g.finish();
}

fn penrose(c: &mut Criterion) {
    let inc = gen_penrose20().unwrap().incidence().unwrap();
    let mut g = c.benchmark_group("penrose");
    g.sample_size(10);
    g.bench_function("removal audit, 15504 subsets", |bch| {
        bch.iter(|| removal_audit(black_box(&inc), 5, 4, 4).unwrap())
    });
    g.finish();
}

criterion_group!(benches, linear_algebra, zero_test, locus_expansion, penrose);
criterion_main!(benches);
