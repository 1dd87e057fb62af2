use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;

use qcurv_core::testutil::module_of;
use qcurv_core::{frobenius_series, fundamental_eval, theta_eval, Rat};

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn tol(k: u32) -> Rat {
    Rat::new(BigInt::from(1), BigInt::from(2).pow(k))
}

fn bench_theta_eval(c: &mut Criterion) {
    c.bench_function("theta_eval_tol_2e-120", |b| {
        b.iter(|| theta_eval(&rat(3, 2), &rat(2, 1), &tol(120)).unwrap())
    });
}

fn bench_frobenius(c: &mut Criterion) {
    let m = module_of(&[&["1/(1+x)"]]);
    c.bench_function("frobenius_series_qexp_24", |b| {
        b.iter(|| frobenius_series(&m, 24).unwrap())
    });
}

fn bench_fundamental(c: &mut Criterion) {
    let m = module_of(&[&["1/(1+x)"]]);
    c.bench_function("fundamental_eval_qexp_16", |b| {
        b.iter(|| fundamental_eval(&m, &rat(1, 2), &rat(2, 1), 16, &tol(40)).unwrap())
    });
}

criterion_group!(benches, bench_theta_eval, bench_frobenius, bench_fundamental);
criterion_main!(benches);
