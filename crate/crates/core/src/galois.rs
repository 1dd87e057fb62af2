//! Generic Galois groups of diagonal modules with constant entries, realized
//! as integer relation lattices: the group cut out inside the diagonal torus
//! by the characters m with c_1^{m_1} ... c_v^{m_v} in q^Z.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::curvature::{CurvatureError, Verdict};
use crate::cyclotomic::{q_field, CycField, PolyQ, RatQ};
use crate::field::{FieldCtx, Prec, Rat, QQ};
use crate::poly::Poly;
use crate::snf::{hermite_normal_form, integer_kernel, smith_normal_form, IMat};

#[derive(Error, Clone, Debug, PartialEq)]
pub enum FactorError {
    #[error("factor {poly} of degree {degree} exceeds the supported factorization range")]
    FactorizationOutOfRange { poly: String, degree: usize },
    #[error("cannot factor zero")]
    Zero,
}

/// Multiplicative normal form of a nonzero element of Q(q):
/// sign * prod p^{e_p} * q^{e_q} * prod f(q)^{e_f} with f monic irreducible,
/// f != q.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredConstant {
    pub sign: i8,
    pub primes: BTreeMap<BigUint, i64>,
    pub q_exponent: i64,
    pub poly_factors: BTreeMap<PolyKey, i64>,
}

/// Ordering wrapper so monic irreducible polynomials can key a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyKey(pub PolyQ);

impl PartialOrd for PolyKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PolyKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let d = self.0.coeffs.len().cmp(&other.0.coeffs.len());
        if d != std::cmp::Ordering::Equal {
            return d;
        }
        for (a, b) in self.0.coeffs.iter().rev().zip(other.0.coeffs.iter().rev()) {
            let c = a.cmp(b);
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// Basis of the relation lattice { m : prod c_i^{m_i} in q^Z }, rows in
/// Hermite normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationLattice {
    pub rank: usize,
    pub dim: usize,
    pub basis: Vec<Vec<i64>>,
}

/// The smallest algebraic subgroup of the diagonal torus containing all
/// curvature tuples, described through its character lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalGroupDescription {
    pub torus_dimension: usize,
    /// Elementary divisors > 1 of the relation basis: orders of the finite
    /// cyclic factors.
    pub finite_part: Vec<u64>,
    /// Saturation of the relation lattice, rows in Hermite normal form.
    pub defining_characters: Vec<Vec<i64>>,
}

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

fn factor_biguint(n: &BigUint) -> Result<BTreeMap<BigUint, i64>, FactorError> {
    let mut out = BTreeMap::new();
    let mut n = n.clone();
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    let mut p = 2u64;
    while n > BigUint::one() {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            *out.entry(n.clone()).or_insert(0) += 1;
            break;
        }
        while (&n % &bp).is_zero() {
            *out.entry(bp.clone()).or_insert(0) += 1;
            n /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
        if p > TRIAL_DIVISION_LIMIT {
            return Err(FactorError::FactorizationOutOfRange {
                poly: n.to_string(),
                degree: 0,
            });
        }
    }
    Ok(out)
}

fn rat_is_square(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().magnitude().sqrt();
    let den = r.denom().magnitude().sqrt();
    let cand = Rat::new(BigInt::from(num), BigInt::from(den));
    if &(&cand * &cand) == r {
        Some(cand)
    } else {
        None
    }
}

/// All rational roots of a polynomial over Q, with multiplicity removed from
/// the returned cofactor.
fn strip_rational_roots(p: &PolyQ) -> Result<(Vec<Rat>, PolyQ), FactorError> {
    let mut roots = Vec::new();
    let mut p = p.clone();
    'outer: loop {
        if p.degree().unwrap_or(0) < 1 {
            return Ok((roots, p));
        }
        // integer model: scale to integer coefficients
        let mut den_lcm = BigInt::one();
        for c in &p.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| c.numer() * &den_lcm / c.denom()).collect();
        if ints[0].is_zero() {
            roots.push(Rat::zero());
            p = p.div_exact(&QQ, &Poly::var(&QQ));
            continue;
        }
        let a0 = factor_biguint(ints[0].magnitude())?;
        let lead = factor_biguint(ints.last().unwrap().magnitude())?;
        for num in divisors(&a0) {
            for den in divisors(&lead) {
                for sign in [1i64, -1] {
                    let cand = Rat::new(BigInt::from(sign) * BigInt::from(num.clone()), BigInt::from(den.clone()));
                    if p.eval(&QQ, &cand).is_zero() {
                        roots.push(cand.clone());
                        let lin = Poly::from_coeffs(&QQ, vec![-cand, Rat::one()]);
                        p = p.div_exact(&QQ, &lin);
                        continue 'outer;
                    }
                }
            }
        }
        return Ok((roots, p));
    }
}

fn divisors(f: &BTreeMap<BigUint, i64>) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for (p, &e) in f {
        let mut next = Vec::new();
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc *= p;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

/// Factor a monic rootless polynomial of degree 2..4 into monic irreducibles
/// over Q, or report it irreducible.
fn factor_rootless(p: &PolyQ) -> Result<Vec<PolyQ>, FactorError> {
    match p.degree().unwrap_or(0) {
        0 => Ok(vec![]),
        1 => Ok(vec![p.clone()]),
        2 => {
            let b = p.coeff(&QQ, 1);
            let c = p.coeff(&QQ, 0);
            let disc = &b * &b - Rat::from_integer(4.into()) * &c;
            match rat_is_square(&disc) {
                None => Ok(vec![p.clone()]),
                Some(s) => {
                    let half = Rat::new(BigInt::one(), BigInt::from(2));
                    let r1 = (&s - &b) * &half;
                    let r2 = (-&s - &b) * &half;
                    Ok(vec![
                        Poly::from_coeffs(&QQ, vec![-r1, Rat::one()]),
                        Poly::from_coeffs(&QQ, vec![-r2, Rat::one()]),
                    ])
                }
            }
        }
        // no rational root => a cubic is irreducible over Q
        3 => Ok(vec![p.clone()]),
        4 => factor_quartic(p),
        d => Err(FactorError::FactorizationOutOfRange {
            poly: p.print(&QQ, "q", Prec::Add),
            degree: d,
        }),
    }
}

/// Quartic with no rational roots: either a product of two rational
/// quadratics or irreducible. Depress and solve the cubic resolvent
/// z^3 + 2P z^2 + (P^2 - 4R) z - Q^2 for a rational square root z = u^2.
fn factor_quartic(p: &PolyQ) -> Result<Vec<PolyQ>, FactorError> {
    let a = p.coeff(&QQ, 3);
    let quarter = Rat::new(BigInt::one(), BigInt::from(4));
    let shift = -(&a * &quarter);
    // depressed y^4 + P y^2 + Q y + R via x = y + shift
    let sub = Poly::from_coeffs(&QQ, vec![shift.clone(), Rat::one()]);
    let mut dep = Poly::constant(&QQ, p.coeffs.last().unwrap().clone());
    for c in p.coeffs.iter().rev().skip(1) {
        dep = dep.mul(&QQ, &sub).add(&QQ, &Poly::constant(&QQ, c.clone()));
    }
    let pp = dep.coeff(&QQ, 2);
    let qq = dep.coeff(&QQ, 1);
    let rr = dep.coeff(&QQ, 0);
    let two = Rat::from_integer(2.into());
    let four = Rat::from_integer(4.into());
    let resolvent = Poly::from_coeffs(
        &QQ,
        vec![
            -(&qq * &qq),
            &pp * &pp - &four * &rr,
            &two * &pp,
            Rat::one(),
        ],
    );
    let (roots, _) = strip_rational_roots(&resolvent)?;
    for z in roots {
        let u = match rat_is_square(&z) {
            Some(u) if !u.is_zero() => u,
            _ => continue,
        };
        // (y^2 + u y + v)(y^2 - u y + w)
        let qu = &qq / &u;
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let v = (&pp + &z - &qu) * &half;
        let w = (&pp + &z + &qu) * &half;
        let f1 = Poly::from_coeffs(&QQ, vec![v, u.clone(), Rat::one()]);
        let f2 = Poly::from_coeffs(&QQ, vec![w, -u, Rat::one()]);
        // undepress: y = x - shift
        let back = Poly::from_coeffs(&QQ, vec![-shift.clone(), Rat::one()]);
        let lift = |f: &PolyQ| {
            let mut out = Poly::constant(&QQ, f.coeffs.last().unwrap().clone());
            for c in f.coeffs.iter().rev().skip(1) {
                out = out.mul(&QQ, &back).add(&QQ, &Poly::constant(&QQ, c.clone()));
            }
            out
        };
        let g1 = lift(&f1);
        let g2 = lift(&f2);
        debug_assert_eq!(g1.mul(&QQ, &g2), *p);
        let mut out = factor_rootless(&g1)?;
        out.extend(factor_rootless(&g2)?);
        return Ok(out);
    }
    // u = 0 branch: biquadratic-style split (y^2+v)(y^2+w)
    if qq.is_zero() {
        let disc = &pp * &pp - &four * &rr;
        if let Some(s) = rat_is_square(&disc) {
            let half = Rat::new(BigInt::one(), BigInt::from(2));
            let v = (&pp + &s) * &half;
            let w = (&pp - &s) * &half;
            let back = Poly::from_coeffs(&QQ, vec![-shift.clone(), Rat::one()]);
            let lift = |f: &PolyQ| {
                let mut out = Poly::constant(&QQ, f.coeffs.last().unwrap().clone());
                for c in f.coeffs.iter().rev().skip(1) {
                    out = out.mul(&QQ, &back).add(&QQ, &Poly::constant(&QQ, c.clone()));
                }
                out
            };
            let g1 = lift(&Poly::from_coeffs(&QQ, vec![v, Rat::zero(), Rat::one()]));
            let g2 = lift(&Poly::from_coeffs(&QQ, vec![w, Rat::zero(), Rat::one()]));
            let mut out = factor_rootless(&g1)?;
            out.extend(factor_rootless(&g2)?);
            return Ok(out);
        }
    }
    Ok(vec![p.clone()])
}

/// Full factorization of a monic polynomial in q into monic irreducibles.
fn factor_monic(p: &PolyQ) -> Result<Vec<PolyQ>, FactorError> {
    let (roots, rest) = strip_rational_roots(p)?;
    let mut out: Vec<PolyQ> = roots
        .into_iter()
        .map(|r| Poly::from_coeffs(&QQ, vec![-r, Rat::one()]))
        .collect();
    out.extend(factor_rootless(&rest)?);
    Ok(out)
}

/// Multiplicative normal form of a nonzero constant of Q(q).
pub fn factor_constant(c: &RatQ) -> Result<FactoredConstant, FactorError> {
    let qf = q_field();
    if qf.is_zero(c) {
        return Err(FactorError::Zero);
    }
    let mut sign = 1i8;
    let mut primes: BTreeMap<BigUint, i64> = BTreeMap::new();
    let mut q_exponent = 0i64;
    let mut poly_factors: BTreeMap<PolyKey, i64> = BTreeMap::new();

    let mut absorb = |p: &PolyQ, orient: i64| -> Result<(), FactorError> {
        // leading rational constant
        let lead = p.leading(&QQ);
        if lead.is_negative() && orient.rem_euclid(2) == 1 {
            sign = -sign;
        }
        for (prime, e) in factor_biguint(lead.numer().magnitude())? {
            *primes.entry(prime).or_insert(0) += e * orient;
        }
        for (prime, e) in factor_biguint(lead.denom().magnitude())? {
            *primes.entry(prime).or_insert(0) -= e * orient;
        }
        let monic = p.monic(&QQ);
        // split off powers of q
        let mut shifted = monic;
        while !shifted.is_zero() && shifted.coeff(&QQ, 0).is_zero() {
            q_exponent += orient;
            shifted = shifted.div_exact(&QQ, &Poly::var(&QQ));
        }
        for f in factor_monic(&shifted)? {
            if f.degree() == Some(0) {
                continue;
            }
            *poly_factors.entry(PolyKey(f)).or_insert(0) += orient;
        }
        Ok(())
    };
    absorb(&c.num, 1)?;
    absorb(&c.den, -1)?;
    primes.retain(|_, e| *e != 0);
    poly_factors.retain(|_, e| *e != 0);
    Ok(FactoredConstant {
        sign,
        primes,
        q_exponent,
        poly_factors,
    })
}

impl FactoredConstant {
    /// Rebuild the constant; used as the soundness oracle in tests.
    pub fn reconstruct(&self) -> RatQ {
        let qf = q_field();
        let mut acc = qf.from_int(self.sign as i64);
        for (p, &e) in &self.primes {
            let base = qf.constant(Rat::from_integer(BigInt::from(p.clone())));
            acc = qf.mul(&acc, &qf.pow(&base, e).unwrap());
        }
        acc = qf.mul(&acc, &qf.pow(&qf.var_elem(), self.q_exponent).unwrap());
        for (f, &e) in &self.poly_factors {
            let base = qf.from_poly(f.0.clone());
            acc = qf.mul(&acc, &qf.pow(&base, e).unwrap());
        }
        acc
    }
}

fn to_i64_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<i64>> {
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| v.to_i64().expect("lattice entry fits i64"))
                .collect()
        })
        .collect()
}

/// Basis of { m in Z^v : prod c_i^{m_i} in q^Z }, via the integer kernel of
/// the exponent matrix (q-column deleted) plus the sign-parity condition.
pub fn relation_lattice(constants: &[RatQ]) -> Result<RelationLattice, FactorError> {
    let dim = constants.len();
    let factored = constants
        .iter()
        .map(factor_constant)
        .collect::<Result<Vec<_>, _>>()?;
    let mut prime_keys: Vec<BigUint> = Vec::new();
    let mut poly_keys: Vec<PolyKey> = Vec::new();
    for f in &factored {
        for p in f.primes.keys() {
            if !prime_keys.contains(p) {
                prime_keys.push(p.clone());
            }
        }
        for k in f.poly_factors.keys() {
            if !poly_keys.contains(k) {
                poly_keys.push(k.clone());
            }
        }
    }
    prime_keys.sort();
    poly_keys.sort();
    let mut rows: IMat = Vec::new();
    for p in &prime_keys {
        rows.push(
            factored
                .iter()
                .map(|f| BigInt::from(*f.primes.get(p).unwrap_or(&0)))
                .collect(),
        );
    }
    for k in &poly_keys {
        rows.push(
            factored
                .iter()
                .map(|f| BigInt::from(*f.poly_factors.get(k).unwrap_or(&0)))
                .collect(),
        );
    }
    if rows.is_empty() {
        rows.push(vec![BigInt::zero(); dim]);
    }
    let mut kernel = integer_kernel(&rows);
    // sign parity: (-1)^{sum m_i s_i} must be +1
    let parity: Vec<BigInt> = factored
        .iter()
        .map(|f| BigInt::from(if f.sign < 0 { 1 } else { 0 }))
        .collect();
    let odd: Vec<usize> = kernel
        .iter()
        .enumerate()
        .filter(|(_, b)| {
            let dot: BigInt = b.iter().zip(&parity).map(|(a, s)| a * s).sum();
            dot.mod_floor(&BigInt::from(2)).is_one()
        })
        .map(|(i, _)| i)
        .collect();
    if let Some(&pivot) = odd.first() {
        for &i in &odd[1..] {
            let add: Vec<BigInt> = kernel[pivot].clone();
            for (x, a) in kernel[i].iter_mut().zip(add) {
                *x += a;
            }
        }
        for x in kernel[pivot].iter_mut() {
            *x *= 2;
        }
    }
    let basis = hermite_normal_form(&kernel);
    Ok(RelationLattice {
        rank: basis.len(),
        dim,
        basis: to_i64_rows(basis),
    })
}

/// Structure of the group cut out by the relation lattice inside the
/// v-dimensional diagonal torus.
pub fn diagonal_galois_group(constants: &[RatQ]) -> Result<DiagonalGroupDescription, FactorError> {
    let lattice = relation_lattice(constants)?;
    let dim = lattice.dim;
    if lattice.rank == 0 {
        return Ok(DiagonalGroupDescription {
            torus_dimension: dim,
            finite_part: vec![],
            defining_characters: vec![],
        });
    }
    let b: IMat = lattice
        .basis
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let snf = smith_normal_form(&b);
    let finite_part = snf
        .divisors
        .iter()
        .filter(|d| **d > BigInt::one())
        .map(|d| d.to_u64().expect("divisor fits u64"))
        .collect();
    // saturation: rows 0..rank of V^{-1} span the saturated lattice
    let saturated: Vec<Vec<BigInt>> = snf.v_inv[..snf.rank].to_vec();
    Ok(DiagonalGroupDescription {
        torus_dimension: dim - lattice.rank,
        finite_part,
        defining_characters: to_i64_rows(hermite_normal_form(&saturated)),
    })
}

/// Check, at every good place n in the range, that the curvature tuple
/// (c_1^n, ..., c_v^n) mod Phi_n satisfies each defining character of the
/// lattice. A correct lattice yields zero failures.
pub fn verify_by_curvatures(
    constants: &[RatQ],
    lattice: &RelationLattice,
    n_min: u32,
    n_max: u32,
) -> Result<Verdict, CurvatureError> {
    assert!(n_min >= 1 && n_min <= n_max);
    assert!(lattice.dim == constants.len());
    let mut outcomes = Vec::new();
    for n in n_min..=n_max {
        let field = CycField::new(n);
        let reduced: Option<Vec<_>> = constants
            .iter()
            .map(|c| {
                let num = field.reduce_poly(&c.num);
                let den = field.reduce_poly(&c.den);
                if num.is_zero() || den.is_zero() {
                    None
                } else {
                    Some(field.mul(&num, &field.inv(&den).unwrap()))
                }
            })
            .collect();
        let reduced = match reduced {
            Some(r) => r,
            None => {
                outcomes.push((n, Err("constant not invertible at this place".to_string())));
                continue;
            }
        };
        let ok = lattice.basis.iter().all(|m| {
            let mut acc = field.one();
            for (c, &e) in reduced.iter().zip(m) {
                let p = field.pow(c, e * n as i64).unwrap();
                acc = field.mul(&acc, &p);
            }
            field.is_one(&acc)
        });
        outcomes.push((n, Ok(ok)));
    }
    Verdict::aggregate(n_min, n_max, 1, outcomes)
}


/// Independent brute-force kernel over the box [-bound, bound]^v, returned
/// in Hermite normal form. Test oracle; exponential in v.
///
/// prod c_i^{m_i} = q^k holds iff the raw numerator and denominator
/// products agree after stripping their powers of q, so the check runs on
/// plain polynomial products with no gcd normalization.
pub fn bruteforce_kernel(constants: &[RatQ], bound: i64) -> Vec<Vec<i64>> {
    let dim = constants.len();
    let strip_q = |p: &PolyQ| -> PolyQ {
        let mut k = 0;
        while k < p.coeffs.len() && p.coeffs[k].is_zero() {
            k += 1;
        }
        Poly::from_coeffs(&QQ, p.coeffs[k..].to_vec())
    };
    // num_pows[i][e] = num_i^e, den_pows[i][e] = den_i^e for 0 <= e <= bound
    let pow_table = |p: &PolyQ| -> Vec<PolyQ> {
        let mut out = vec![Poly::one(&QQ)];
        for _ in 0..bound {
            out.push(out.last().unwrap().mul(&QQ, p));
        }
        out
    };
    let num_pows: Vec<Vec<PolyQ>> = constants.iter().map(|c| pow_table(&c.num)).collect();
    let den_pows: Vec<Vec<PolyQ>> = constants.iter().map(|c| pow_table(&c.den)).collect();

    let mut vectors: Vec<Vec<BigInt>> = Vec::new();
    let mut m = vec![-bound; dim];
    loop {
        let mut lhs = Poly::one(&QQ);
        let mut rhs = Poly::one(&QQ);
        for i in 0..dim {
            let e = m[i];
            if e >= 0 {
                lhs = lhs.mul(&QQ, &num_pows[i][e as usize]);
                rhs = rhs.mul(&QQ, &den_pows[i][e as usize]);
            } else {
                lhs = lhs.mul(&QQ, &den_pows[i][(-e) as usize]);
                rhs = rhs.mul(&QQ, &num_pows[i][(-e) as usize]);
            }
        }
        if strip_q(&lhs) == strip_q(&rhs) {
            vectors.push(m.iter().map(|&v| BigInt::from(v)).collect());
        }
        // odometer
        let mut i = 0;
        loop {
            if i == dim {
                let rows = hermite_normal_form(&vectors);
                return rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| v.to_i64().unwrap()).collect())
                    .collect();
            }
            m[i] += 1;
            if m[i] <= bound {
                break;
            }
            m[i] = -bound;
            i += 1;
        }
    }
}

/// Is this constant exactly q^k for some integer k?
pub fn is_q_power(c: &RatQ) -> bool {
    let monomial_one = |p: &PolyQ| -> Option<()> {
        let d = p.degree()?;
        for k in 0..d {
            if !p.coeff(&QQ, k).is_zero() {
                return None;
            }
        }
        if p.leading(&QQ).is_one() {
            Some(())
        } else {
            None
        }
    };
    monomial_one(&c.num).is_some() && monomial_one(&c.den).is_some()
}
