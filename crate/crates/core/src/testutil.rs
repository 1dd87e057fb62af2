//! Random instance generators shared by unit tests, the acceptance suite and
//! the benchmarks.

use rand::Rng;

use crate::cyclotomic::{q_field, x_field, RatFun, RatQ};
use crate::field::{rat_int, FieldCtx, QQ};
use crate::frac::FracField;
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::qmodule::QDiffModule;

/// Random polynomial in q of degree <= `deg` with integer coefficients of
/// absolute value <= `height`.
pub fn random_ratq<R: Rng>(rng: &mut R, deg: usize, height: i64) -> RatQ {
    let qf = q_field();
    let d = rng.gen_range(0..=deg);
    let coeffs = (0..=d)
        .map(|_| rat_int(rng.gen_range(-height..=height)))
        .collect();
    qf.from_poly(Poly::from_coeffs(&QQ, coeffs))
}

fn nonzero_ratq<R: Rng>(rng: &mut R, deg: usize, height: i64) -> RatQ {
    loop {
        let c = random_ratq(rng, deg, height);
        if !q_field().is_zero(&c) {
            return c;
        }
    }
}

/// Random rational function in x over Q(q), numerator/denominator degree
/// <= `deg`, coefficient height <= `height`.
pub fn random_ratfun<R: Rng>(rng: &mut R, deg: usize, height: i64) -> RatFun {
    let xf = x_field();
    let num = random_poly_x(rng, deg, height);
    loop {
        let den = random_poly_x(rng, deg, height);
        if let Some(f) = xf.from_parts(num.clone(), den) {
            return f;
        }
    }
}

/// Random polynomial entry in x with Q(q)-polynomial coefficients.
pub fn random_poly_x<R: Rng>(rng: &mut R, deg: usize, height: i64) -> Poly<RatQ> {
    let xf: FracField<crate::cyclotomic::QField> = x_field();
    let d = rng.gen_range(0..=deg);
    let coeffs = (0..=d).map(|_| random_ratq(rng, 2, height)).collect();
    Poly::from_coeffs(&xf.base, coeffs)
}

/// Random polynomial entry of exact x-degree budget with a nonzero chance of
/// being sparse; always a polynomial (denominator 1).
pub fn random_poly_entry<R: Rng>(rng: &mut R, deg: usize, height: i64) -> RatFun {
    x_field().from_poly(random_poly_x(rng, deg, height))
}

/// Random square matrix of polynomial entries.
pub fn random_matrix<R: Rng>(rng: &mut R, dim: usize, deg: usize, height: i64) -> Mat<RatFun> {
    Mat::from_fn(dim, dim, |_, _| random_poly_entry(rng, deg, height))
}

/// Random invertible matrix of polynomial entries, by rejection.
pub fn random_invertible<R: Rng>(rng: &mut R, dim: usize, deg: usize, height: i64) -> Mat<RatFun> {
    let xf = x_field();
    loop {
        let m = random_matrix(rng, dim, deg, height);
        if !xf.is_zero(&m.det(&xf)) {
            return m;
        }
    }
}

/// Random q-difference module of the given rank.
pub fn random_module<R: Rng>(rng: &mut R, dim: usize, deg: usize, height: i64) -> QDiffModule {
    QDiffModule::new(random_invertible(rng, dim, deg, height)).unwrap()
}

/// Random rank-one module with a nonzero constant from Q(q).
pub fn random_constant_module<R: Rng>(rng: &mut R, height: i64) -> QDiffModule {
    let xf = x_field();
    let c = nonzero_ratq(rng, 2, height);
    QDiffModule::new(Mat::from_rows(vec![vec![xf.constant(c)]])).unwrap()
}

/// A gauge transform of the identity module: trivial by construction.
pub fn random_trivial_module<R: Rng>(rng: &mut R, dim: usize, deg: usize, height: i64) -> QDiffModule {
    let id = QDiffModule::new(Mat::identity(&x_field(), dim)).unwrap();
    let p = random_invertible(rng, dim, deg, height);
    id.gauge(&p).unwrap()
}

/// Parse a matrix of expression strings (test convenience).
pub fn mat_of(rows: &[&[&str]]) -> Mat<RatFun> {
    Mat::from_rows(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|s| crate::expr::parse_ratfun(s).unwrap())
                    .collect()
            })
            .collect(),
    )
}

/// Parse a module from expression strings (test convenience).
pub fn module_of(rows: &[&[&str]]) -> QDiffModule {
    QDiffModule::new(mat_of(rows)).unwrap()
}
