//! Certified numeric evaluation of theta building blocks and Frobenius-style
//! series solutions, over exact rational ball arithmetic.
//!
//! Everything here works with `q_val` a rational number > 1 and evaluation
//! points in Q*. Values are returned as balls midpoint +/- radius whose radii
//! come from certified geometric tail bounds, never from rounding.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cyclotomic::{q_field, RatFun, RatQ};
use crate::field::{FieldCtx, Rat, QQ};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::qmodule::QDiffModule;

#[derive(Error, Clone, Debug, PartialEq)]
pub enum ThetaError {
    #[error("denominator ball [{midpoint} +/- {radius}] contains zero")]
    NearZero { midpoint: Rat, radius: Rat },
    #[error("resonance at order {k}: q^{k} c_{m} = c_{l}")]
    Resonant { k: usize, l: usize, m: usize },
    #[error("system is not regular singular: {0}")]
    NotRegularSingular(String),
    #[error("series truncation bound {bound} exceeds the tolerance {tol}")]
    TruncationDominates { bound: Rat, tol: Rat },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A certified enclosure [midpoint - radius, midpoint + radius] of a real
/// number; radii are rigorous tail or propagation bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct BallValue {
    pub midpoint: Rat,
    pub radius: Rat,
}

impl BallValue {
    pub fn exact(midpoint: Rat) -> Self {
        BallValue {
            midpoint,
            radius: Rat::zero(),
        }
    }

    pub fn new(midpoint: Rat, radius: Rat) -> Self {
        debug_assert!(!radius.is_negative());
        BallValue { midpoint, radius }
    }

    pub fn contains_zero(&self) -> bool {
        self.midpoint.abs() <= self.radius
    }

    pub fn contains(&self, v: &Rat) -> bool {
        (&self.midpoint - v).abs() <= self.radius
    }

    pub fn add(&self, other: &Self) -> Self {
        BallValue {
            midpoint: &self.midpoint + &other.midpoint,
            radius: &self.radius + &other.radius,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BallValue {
            midpoint: &self.midpoint - &other.midpoint,
            radius: &self.radius + &other.radius,
        }
    }

    pub fn neg(&self) -> Self {
        BallValue {
            midpoint: -&self.midpoint,
            radius: self.radius.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // |ab - m1 m2| <= |m1| r2 + |m2| r1 + r1 r2
        let radius = &self.midpoint.abs() * &other.radius
            + &other.midpoint.abs() * &self.radius
            + &self.radius * &other.radius;
        BallValue {
            midpoint: &self.midpoint * &other.midpoint,
            radius,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        BallValue {
            midpoint: &self.midpoint * c,
            radius: &self.radius * &c.abs(),
        }
    }

    pub fn grow(&self, extra: &Rat) -> Self {
        BallValue {
            midpoint: self.midpoint.clone(),
            radius: &self.radius + extra,
        }
    }

    /// Reciprocal; the denominator must exclude zero. For |m| > r the image
    /// of [m - r, m + r] under inversion sits inside
    /// [1/m - r/(|m|(|m|-r)), 1/m + r/(|m|(|m|-r))].
    pub fn recip(&self) -> Result<Self, ThetaError> {
        let m = self.midpoint.abs();
        if m <= self.radius {
            return Err(ThetaError::NearZero {
                midpoint: self.midpoint.clone(),
                radius: self.radius.clone(),
            });
        }
        let radius = &self.radius / (&m * (&m - &self.radius));
        Ok(BallValue {
            midpoint: self.midpoint.recip(),
            radius,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ThetaError> {
        Ok(self.mul(&other.recip()?))
    }

    /// An upper bound for |value| over the ball.
    pub fn abs_bound(&self) -> Rat {
        self.midpoint.abs() + &self.radius
    }
}

fn rat_pow(r: &Rat, e: i64) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    let base = if e < 0 { r.recip() } else { r.clone() };
    let mut acc = Rat::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc * &base;
    }
    acc
}

fn check_point(x0: &Rat, q_val: &Rat, tol: &Rat) -> Result<(), ThetaError> {
    if x0.is_zero() {
        return Err(ThetaError::InvalidInput("x0 must be nonzero".to_string()));
    }
    if *q_val <= Rat::one() {
        return Err(ThetaError::InvalidInput(format!(
            "q must be a rational > 1, got {q_val}"
        )));
    }
    if !tol.is_positive() {
        return Err(ThetaError::InvalidInput("tol must be positive".to_string()));
    }
    Ok(())
}

/// Term q^{-n(n-1)/2} x^n of the theta series.
fn theta_term(q_val: &Rat, x0: &Rat, n: i64) -> Rat {
    rat_pow(q_val, -n * (n - 1) / 2) * rat_pow(x0, n)
}

/// Term n q^{-n(n-1)/2} x^{n-1} of the termwise derivative.
fn theta_deriv_term(q_val: &Rat, x0: &Rat, n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n)) * rat_pow(q_val, -n * (n - 1) / 2) * rat_pow(x0, n - 1)
}

/// Smallest symmetric cutoff N with a certified tail bound below tol, plus
/// that bound.
///
/// For |n| >= N with q^N >= 2 max(|x|, 1/|x|) the term ratios
/// |t_{n+1}/t_n| = |x|/q^n and |t_{-(m+1)}/t_{-m}| = (1/|x|)/q^{m+1} are
/// both <= 1/2, so each one-sided tail is dominated by a geometric series
/// with ratio 1/2 and sum <= 2 |first omitted term|. The derivative series
/// carries an extra factor (n+1)/n <= 2, absorbed by requiring
/// q^N >= 4 max(|x|, 1/|x|).
fn theta_cutoff(q_val: &Rat, x0: &Rat, tol: &Rat, derivative: bool) -> (i64, Rat) {
    let h = {
        let a = x0.abs();
        let b = a.recip();
        if a > b {
            a
        } else {
            b
        }
    };
    let factor = Rat::from_integer(BigInt::from(if derivative { 4 } else { 2 }));
    let two = Rat::from_integer(2.into());
    let mut n: i64 = 1;
    loop {
        let ratio_ok = rat_pow(q_val, n) >= &factor * &h;
        if ratio_ok {
            let (a, b) = if derivative {
                (
                    theta_deriv_term(q_val, x0, n + 1).abs(),
                    theta_deriv_term(q_val, x0, -(n + 1)).abs(),
                )
            } else {
                (
                    theta_term(q_val, x0, n + 1).abs(),
                    theta_term(q_val, x0, -(n + 1)).abs(),
                )
            };
            let bound = &two * &(a + b);
            if &bound < tol {
                return (n, bound);
            }
        }
        n += 1;
    }
}

/// Certified evaluation of Theta_q(x0) = sum over n in Z of
/// q^{-n(n-1)/2} x0^n.
pub fn theta_eval(x0: &Rat, q_val: &Rat, tol: &Rat) -> Result<BallValue, ThetaError> {
    check_point(x0, q_val, tol)?;
    let (cutoff, bound) = theta_cutoff(q_val, x0, tol, false);
    let mut sum = Rat::zero();
    for n in -cutoff..=cutoff {
        sum += theta_term(q_val, x0, n);
    }
    Ok(BallValue::new(sum, bound))
}

/// Certified evaluation of the termwise derivative Theta_q'(x0).
pub fn theta_deriv_eval(x0: &Rat, q_val: &Rat, tol: &Rat) -> Result<BallValue, ThetaError> {
    check_point(x0, q_val, tol)?;
    let (cutoff, bound) = theta_cutoff(q_val, x0, tol, true);
    let mut sum = Rat::zero();
    for n in -cutoff..=cutoff {
        sum += theta_deriv_term(q_val, x0, n);
    }
    Ok(BallValue::new(sum, bound))
}

/// The q-character e_{q,c}(x0) = Theta(c x0) / Theta(x0), a solution of
/// y(qx) = c y(x).
pub fn char_solution_eval(
    c: &Rat,
    x0: &Rat,
    q_val: &Rat,
    tol: &Rat,
) -> Result<BallValue, ThetaError> {
    if c.is_zero() {
        return Err(ThetaError::InvalidInput("c must be nonzero".to_string()));
    }
    let num = theta_eval(&(c * x0), q_val, tol)?;
    let den = theta_eval(x0, q_val, tol)?;
    num.div(&den)
}

/// The q-logarithm l(x0) = x0 Theta'(x0) / Theta(x0), a solution of
/// y(qx) = y(x) + 1.
pub fn log_solution_eval(x0: &Rat, q_val: &Rat, tol: &Rat) -> Result<BallValue, ThetaError> {
    let num = theta_deriv_eval(x0, q_val, tol)?;
    let den = theta_eval(x0, q_val, tol)?;
    Ok(num.div(&den)?.scale(x0))
}

/// Truncated Frobenius-style fundamental series for a regular singular,
/// non-resonant system: F with F(qx) B_0 = B(x) F(x) mod x^{N+1}, F_0 = I.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    pub order: usize,
    /// F_0, ..., F_N as matrices over Q(q).
    pub coefficients: Vec<Mat<RatQ>>,
    /// Diagonal entries c_i of B_0.
    pub exponents: Vec<RatQ>,
    pub residual_order: usize,
}

/// x-power-series coefficients 0..=order of a rational function finite at
/// x = 0.
fn series_coeffs(f: &RatFun, order: usize) -> Result<Vec<RatQ>, ThetaError> {
    let qf = q_field();
    let d0 = f.den.coeff(&qf, 0);
    let d0_inv = qf.inv(&d0).ok_or_else(|| {
        ThetaError::NotRegularSingular("entry has a pole at x = 0".to_string())
    })?;
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = f.num.coeff(&qf, k);
        for j in 1..=k {
            let dj = f.den.coeff(&qf, j);
            if qf.is_zero(&dj) {
                continue;
            }
            acc = qf.sub(&acc, &qf.mul(&dj, &out[k - j]));
        }
        out.push(qf.mul(&acc, &d0_inv));
    }
    Ok(out)
}

/// Matrices B_0..B_N of the x-expansion of the system matrix B = A^{-1}.
fn system_series(m: &QDiffModule, order: usize) -> Result<Vec<Mat<RatQ>>, ThetaError> {
    let b = m.system_matrix();
    let per_entry = b.try_map(|e| series_coeffs(e, order))?;
    Ok((0..=order)
        .map(|k| per_entry.map(|v| v[k].clone()))
        .collect())
}

/// Build the truncated series solution, checking regular-singularity and
/// non-resonance exactly in Q(q).
pub fn frobenius_series(m: &QDiffModule, order: usize) -> Result<SeriesSolution, ThetaError> {
    let qf = q_field();
    let b = system_series(m, order)?;
    let dim = m.dim;
    // B_0 must be diagonal invertible
    let mut exponents = Vec::with_capacity(dim);
    for i in 0..dim {
        for j in 0..dim {
            if i != j && !qf.is_zero(b[0].at(i, j)) {
                return Err(ThetaError::NotRegularSingular(
                    "constant term of the system matrix is not diagonal".to_string(),
                ));
            }
        }
        let c = b[0].at(i, i).clone();
        if qf.is_zero(&c) {
            return Err(ThetaError::NotRegularSingular(
                "constant term of the system matrix is singular".to_string(),
            ));
        }
        exponents.push(c);
    }
    // non-resonance: q^k c_m != c_l for 1 <= k <= order
    let qvar = qf.var_elem();
    let mut qpow = qf.one();
    let mut denoms: Vec<Mat<RatQ>> = Vec::with_capacity(order);
    for k in 1..=order {
        qpow = qf.mul(&qpow, &qvar);
        let mut denom = Mat::from_fn(dim, dim, |_, _| qf.zero());
        for l in 0..dim {
            for mm in 0..dim {
                let d = qf.sub(&qf.mul(&qpow, &exponents[mm]), &exponents[l]);
                if qf.is_zero(&d) {
                    return Err(ThetaError::Resonant {
                        k,
                        l: l + 1,
                        m: mm + 1,
                    });
                }
                *denom.at_mut(l, mm) = d;
            }
        }
        denoms.push(denom);
    }
    // recursion: F_k[l,m] (q^k c_m - c_l) = (sum_{j=1}^k B_j F_{k-j})[l,m]
    let mut coeffs: Vec<Mat<RatQ>> = vec![Mat::identity(&qf, dim)];
    for k in 1..=order {
        let mut rhs = Mat::from_fn(dim, dim, |_, _| qf.zero());
        for j in 1..=k {
            rhs = rhs.add(&qf, &b[j].mul(&qf, &coeffs[k - j]));
        }
        let fk = Mat::from_fn(dim, dim, |l, mm| {
            qf.mul(rhs.at(l, mm), &qf.inv(denoms[k - 1].at(l, mm)).unwrap())
        });
        coeffs.push(fk);
    }
    // exact symbolic residual check: F(qx) B_0 - B(x) F(x) = 0 mod x^{order+1}
    debug_assert!({
        let mut ok = true;
        for k in 0..=order {
            let mut lhs = coeffs[k].map(|e| {
                let qk = qf.pow(&qvar, k as i64).unwrap();
                qf.mul(e, &qk)
            });
            lhs = lhs.mul(&qf, &b[0]);
            let mut rhs = Mat::from_fn(dim, dim, |_, _| qf.zero());
            for j in 0..=k {
                rhs = rhs.add(&qf, &b[j].mul(&qf, &coeffs[k - j]));
            }
            ok &= lhs.sub(&qf, &rhs).entries().all(|e| qf.is_zero(e));
        }
        ok
    });
    Ok(SeriesSolution {
        order,
        coefficients: coeffs,
        exponents,
        residual_order: order,
    })
}

/// Evaluate an element of Q(q) at a rational q-value.
fn eval_ratq(c: &RatQ, q_val: &Rat) -> Result<Rat, ThetaError> {
    let den = c.den.eval(&QQ, q_val);
    if den.is_zero() {
        return Err(ThetaError::InvalidInput(format!(
            "coefficient has a pole at q = {q_val}"
        )));
    }
    Ok(c.num.eval(&QQ, q_val) / den)
}

fn eval_ratq_mat(m: &Mat<RatQ>, q_val: &Rat) -> Result<Mat<Rat>, ThetaError> {
    m.try_map(|e| eval_ratq(e, q_val))
}

fn eval_ratfun_point(f: &RatFun, q_val: &Rat, x0: &Rat) -> Result<Rat, ThetaError> {
    let eval_poly = |p: &Poly<RatQ>| -> Result<Rat, ThetaError> {
        let mut acc = Rat::zero();
        for c in p.coeffs.iter().rev() {
            acc = acc * x0 + eval_ratq(c, q_val)?;
        }
        Ok(acc)
    };
    let den = eval_poly(&f.den)?;
    if den.is_zero() {
        return Err(ThetaError::InvalidInput(format!(
            "system matrix has a pole at x = {x0}"
        )));
    }
    Ok(eval_poly(&f.num)? / den)
}

fn max_abs(m: &Mat<Rat>) -> Rat {
    m.entries()
        .map(|e| e.abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// A fundamental solution value U(x0) with its functional-equation residual
/// U(q x0) - B(x0) U(x0), both as certified ball matrices.
#[derive(Clone, Debug)]
pub struct FundamentalValue {
    pub value: Mat<BallValue>,
    pub residual: Mat<BallValue>,
    pub truncation_bound: Rat,
}

/// Evaluate the truncated fundamental solution
/// U(x0) = F(x0) diag(e_{q,c_i}(x0)) with a certified residual ball for
/// U(q x0) - B(x0) U(x0).
///
/// The series tails sum_{k>N} F_k(q_val) x^k at x = x0 and x = q x0 are
/// bounded by a measured geometric envelope: with
/// t_k = max|F_k(q_val)| |x0|^k, the observed ratios t_k/t_{k-1} over the
/// last quarter of computed orders must stay below 1/2 (and below 1/(2q)
/// for the q x0 point), which certifies tail <= t_N (resp. <= t_N q^N)
/// under the assumption that the envelope keeps decaying at the observed
/// rate; if the ratio test fails the call reports TruncationDominates.
pub fn fundamental_eval(
    m: &QDiffModule,
    x0: &Rat,
    q_val: &Rat,
    order: usize,
    tol: &Rat,
) -> Result<FundamentalValue, ThetaError> {
    check_point(x0, q_val, tol)?;
    if order < 4 {
        return Err(ThetaError::InvalidInput(
            "order must be at least 4".to_string(),
        ));
    }
    let series = frobenius_series(m, order)?;
    let dim = m.dim;
    let c_vals: Vec<Rat> = series
        .exponents
        .iter()
        .map(|c| eval_ratq(c, q_val))
        .collect::<Result<_, _>>()?;
    for c in &c_vals {
        if c.is_zero() {
            return Err(ThetaError::InvalidInput(
                "an exponent specializes to zero".to_string(),
            ));
        }
    }
    let f_coeffs: Vec<Mat<Rat>> = series
        .coefficients
        .iter()
        .map(|fk| eval_ratq_mat(fk, q_val))
        .collect::<Result<_, _>>()?;

    // series tails via the measured geometric envelope on t_k
    let t: Vec<Rat> = f_coeffs
        .iter()
        .enumerate()
        .map(|(k, fk)| max_abs(fk) * rat_pow(&x0.abs(), k as i64))
        .collect();
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let ratio_bound = &half / q_val;
    let window = (order / 4).max(2);
    let mut envelope_ok = true;
    for k in (order + 1 - window)..=order {
        if t[k].is_zero() {
            continue;
        }
        if t[k - 1].is_zero() || &t[k] / &t[k - 1] > ratio_bound {
            envelope_ok = false;
        }
    }
    let qn = rat_pow(q_val, order as i64);
    let tail_x0 = t[order].clone(); // sum of t_N (1/2 + 1/4 + ...)
    let tail_qx0 = &t[order] * &qn; // ratios at q x0 stay <= 1/2
    if !envelope_ok {
        return Err(ThetaError::TruncationDominates {
            bound: tail_qx0,
            tol: tol.clone(),
        });
    }

    let eval_f = |at: &Rat| -> Mat<Rat> {
        let mut acc = Mat::from_fn(dim, dim, |_, _| Rat::zero());
        for fk in f_coeffs.iter().rev() {
            acc = Mat::from_fn(dim, dim, |i, j| {
                &(acc.at(i, j) * at) + fk.at(i, j)
            });
        }
        acc
    };
    let qx0 = q_val * x0;
    let f_x0 = eval_f(x0);
    let f_qx0 = eval_f(&qx0);
    let b_x0 = m
        .system_matrix()
        .try_map(|e| eval_ratfun_point(e, q_val, x0))?;

    let chars: Vec<BallValue> = c_vals
        .iter()
        .map(|c| char_solution_eval(c, x0, q_val, tol))
        .collect::<Result<_, _>>()?;

    // U(x0) with the truncation tail folded into each column's radius
    let value = Mat::from_fn(dim, dim, |i, j| {
        BallValue::exact(f_x0.at(i, j).clone())
            .grow(&tail_x0)
            .mul(&chars[j])
    });

    // exact part of the residual: (F(qx0) B_0 - B(x0) F(x0)) diag(e_j),
    // using e(q x0) = c e(x0)
    let mut exact_res = Mat::from_fn(dim, dim, |i, j| {
        &(f_qx0.at(i, j) * &c_vals[j]) - &{
            let mut s = Rat::zero();
            for k in 0..dim {
                s += b_x0.at(i, k) * f_x0.at(k, j);
            }
            s
        }
    });
    // tail contribution: |F-tail(qx0)| |c_j| + |B(x0)| * dim * |F-tail(x0)|
    let b_norm = max_abs(&b_x0);
    let dim_rat = Rat::from_integer(BigInt::from(dim as i64));
    let truncation_bound = {
        let cmax = c_vals
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rat::zero);
        &tail_qx0 * &cmax + &(&b_norm * &dim_rat) * &tail_x0
    };
    if &truncation_bound > tol {
        return Err(ThetaError::TruncationDominates {
            bound: truncation_bound,
            tol: tol.clone(),
        });
    }
    let residual = Mat::from_fn(dim, dim, |i, j| {
        let e = std::mem::replace(exact_res.at_mut(i, j), Rat::zero());
        BallValue::exact(e).grow(&truncation_bound).mul(&chars[j])
    });
    Ok(FundamentalValue {
        value,
        residual,
        truncation_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::module_of;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn tol40() -> Rat {
        rat_pow(&rat(2, 1), -40)
    }

    #[test]
    fn theta_matches_direct_sum_at_one() {
        let v = theta_eval(&rat(1, 1), &rat(2, 1), &tol40()).unwrap();
        // independent oracle: direct summation over |n| <= 12
        let mut oracle = Rat::zero();
        for n in -12i64..=12 {
            oracle += rat_pow(&rat(2, 1), -n * (n - 1) / 2);
        }
        assert!((&v.midpoint - &oracle).abs() <= &v.radius + &tol40());
        assert!(v.radius < tol40());
    }

    #[test]
    fn theta_functional_equation() {
        let q = rat(2, 1);
        let tol = tol40();
        for x0 in [rat(1, 1), rat(1, 2), rat(3, 1), rat(-3, 2)] {
            let lhs = theta_eval(&(&q * &x0), &q, &tol).unwrap();
            let rhs = theta_eval(&x0, &q, &tol).unwrap().scale(&(&q * &x0));
            assert!(lhs.sub(&rhs).contains_zero(), "x0 = {x0}");
        }
    }

    #[test]
    fn theta_vanishes_at_minus_one() {
        // Theta has zeros on -q^Z; the ball at -1 must straddle zero
        let v = theta_eval(&rat(-1, 1), &rat(2, 1), &tol40()).unwrap();
        assert!(v.contains_zero());
        assert!(matches!(
            char_solution_eval(&rat(2, 1), &rat(-1, 1), &rat(2, 1), &tol40()),
            Err(ThetaError::NearZero { .. })
        ));
        assert!(matches!(
            log_solution_eval(&rat(-1, 1), &rat(2, 1), &tol40()),
            Err(ThetaError::NearZero { .. })
        ));
    }

    #[test]
    fn char_solution_is_multiplicative_q_character() {
        let q = rat(2, 1);
        let tol = tol40();
        for c in [rat(2, 1), rat(3, 1), rat(1, 2)] {
            for x0 in [rat(1, 1), rat(1, 2), rat(3, 1)] {
                let lhs = char_solution_eval(&c, &(&q * &x0), &q, &tol).unwrap();
                let rhs = char_solution_eval(&c, &x0, &q, &tol).unwrap().scale(&c);
                assert!(lhs.sub(&rhs).contains_zero(), "c = {c}, x0 = {x0}");
            }
        }
        // c = 1: exactly 1 up to division radius
        let one = char_solution_eval(&rat(1, 1), &rat(1, 1), &rat(2, 1), &tol40()).unwrap();
        assert!(one.contains(&rat(1, 1)));
    }

    #[test]
    fn log_solution_shifts_by_one() {
        let q = rat(2, 1);
        let tol = tol40();
        for x0 in [rat(1, 1), rat(1, 2), rat(3, 1)] {
            let lhs = log_solution_eval(&(&q * &x0), &q, &tol).unwrap();
            let rhs = log_solution_eval(&x0, &q, &tol).unwrap();
            let shifted = rhs.add(&BallValue::exact(rat(1, 1)));
            assert!(lhs.sub(&shifted).contains_zero(), "x0 = {x0}");
        }
    }

    #[test]
    fn log_at_one_is_one_half() {
        // pairing n <-> 1-n matches the exponents n(n-1)/2, so
        // Theta'(1)/Theta(1) = 1/2 exactly
        let v = log_solution_eval(&rat(1, 1), &rat(2, 1), &tol40()).unwrap();
        assert!(v.contains(&rat(1, 2)));
    }

    #[test]
    fn ball_shrinks_with_tolerance() {
        // halving tol never moves the midpoint outside the previous ball
        let q = rat(2, 1);
        let x0 = rat(3, 2);
        let mut tol = rat(1, 1024);
        let mut prev = theta_eval(&x0, &q, &tol).unwrap();
        for _ in 0..20 {
            tol = &tol * &rat(1, 2);
            let next = theta_eval(&x0, &q, &tol).unwrap();
            assert!(prev.contains(&next.midpoint));
            assert!(next.radius <= prev.radius);
            prev = next;
        }
    }

    #[test]
    fn frobenius_constant_system() {
        // A = [1/3] gives B = [3]; F = I at every order
        let m = module_of(&[&["1/3"]]);
        let s = frobenius_series(&m, 8).unwrap();
        let qf = q_field();
        assert_eq!(s.exponents, vec![qf.from_int(3)]);
        for k in 1..=8 {
            assert!(qf.is_zero(s.coefficients[k].at(0, 0)));
        }
    }

    #[test]
    fn frobenius_q_exponential() {
        // B = [1+x] i.e. A = [1/(1+x)]: F_k = 1/prod_{j<=k} (q^j - 1)
        let m = module_of(&[&["1/(1+x)"]]);
        let s = frobenius_series(&m, 16).unwrap();
        let qf = q_field();
        let mut expect = qf.one();
        for k in 1..=16usize {
            let qk = qf.pow(&qf.var_elem(), k as i64).unwrap();
            expect = qf.mul(&expect, &qf.inv(&qf.sub(&qk, &qf.one())).unwrap());
            assert_eq!(*s.coefficients[k].at(0, 0), expect, "order {k}");
        }
    }

    #[test]
    fn frobenius_resonance_detected() {
        // B = diag(1, q): q^1 c_1 - c_2 = 0
        let m = module_of(&[&["1", "0"], &["0", "1/q"]]);
        assert!(matches!(
            frobenius_series(&m, 4),
            Err(ThetaError::Resonant { k: 1, l: 2, m: 1 })
        ));
    }

    #[test]
    fn frobenius_rejects_pole_at_zero() {
        // B = [1/x] has a pole at 0
        let m = module_of(&[&["x"]]);
        assert!(matches!(
            frobenius_series(&m, 4),
            Err(ThetaError::NotRegularSingular(_))
        ));
    }

    #[test]
    fn fundamental_identity_module() {
        let m = module_of(&[&["1"]]);
        let v = fundamental_eval(&m, &rat(1, 2), &rat(2, 1), 8, &tol40()).unwrap();
        assert!(v.value.at(0, 0).contains(&rat(1, 1)));
        assert!(v.residual.at(0, 0).contains_zero());
    }

    #[test]
    fn fundamental_constant_three() {
        // B = [3]: U = Theta(3 x0)/Theta(x0); residual U(q x0) - 3 U(x0)
        let m = module_of(&[&["1/3"]]);
        let v = fundamental_eval(&m, &rat(1, 1), &rat(2, 1), 8, &tol40()).unwrap();
        let direct = char_solution_eval(&rat(3, 1), &rat(1, 1), &rat(2, 1), &tol40()).unwrap();
        assert!(v
            .value
            .at(0, 0)
            .sub(&direct)
            .contains_zero());
        assert!(v.residual.at(0, 0).contains_zero());
    }

    #[test]
    fn fundamental_q_exponential_residual_small() {
        let m = module_of(&[&["1/(1+x)"]]);
        let v = fundamental_eval(&m, &rat(1, 2), &rat(2, 1), 16, &tol40()).unwrap();
        let r = v.residual.at(0, 0);
        assert!(r.contains_zero());
        assert!(r.radius < rat_pow(&rat(2, 1), -20), "radius {}", r.radius);
        // independent higher-order run agrees within the ball
        let w = fundamental_eval(&m, &rat(1, 2), &rat(2, 1), 32, &tol40()).unwrap();
        assert!(v
            .value
            .at(0, 0)
            .sub(w.value.at(0, 0))
            .contains_zero());
    }
}
