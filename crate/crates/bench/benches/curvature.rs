use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;

use qcurv_core::testutil::{random_trivial_module, module_of};
use qcurv_core::{curvature_at, cyclotomic, triviality_scan};

fn bench_cyclotomic(c: &mut Criterion) {
    c.bench_function("cyclotomic_phi_105", |b| b.iter(|| cyclotomic(105)));
}

fn bench_curvature_at(c: &mut Criterion) {
    let theta = module_of(&[&["q*x"]]);
    let mut group = c.benchmark_group("curvature_at_theta");
    for n in [6u32, 12, 20] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| curvature_at(&theta, n).unwrap())
        });
    }
    group.finish();
}

fn bench_trivial_scan(c: &mut Criterion) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let m = random_trivial_module(&mut rng, 2, 2, 5);
    c.bench_function("scan_gauge_of_identity_1_12", |b| {
        b.iter(|| triviality_scan(&m, 1, 12, 3, false).unwrap())
    });
}

criterion_group!(benches, bench_cyclotomic, bench_curvature_at, bench_trivial_scan);
criterion_main!(benches);
