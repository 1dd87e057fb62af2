//! Cyclotomic places of Q(q): the polynomial Phi_n, the quotient field
//! Q(zeta_n) = Q[q]/(Phi_n), and reduction of rational functions modulo a
//! place.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldCtx, Prec, Rat, QQ};
use crate::frac::{Frac, FracField};
use crate::poly::Poly;

/// Polynomial over Q; by convention in the variable `q` unless stated.
pub type PolyQ = Poly<Rat>;
/// Element of Q(q).
pub type RatQ = Frac<Rat>;
/// The field Q(q).
pub type QField = FracField<QQ>;
/// Element of Q(q)(x): numerator and denominator are polynomials in `x`
/// with Q(q) coefficients.
pub type RatFun = Frac<RatQ>;
/// The field Q(q)(x).
pub type XField = FracField<QField>;
/// Residue of Q[q] mod Phi_n, i.e. an element of Q(zeta_n).
pub type CycElem = Poly<Rat>;
/// Element of Q(zeta_n)(x).
pub type CycFun = Frac<CycElem>;
/// The field Q(zeta_n)(x).
pub type CycXField = FracField<CycField>;

pub fn q_field() -> QField {
    FracField::new(QQ, "q")
}

pub fn x_field() -> XField {
    FracField::new(q_field(), "x")
}

/// The n-th cyclotomic polynomial, by iterated exact division:
/// Phi_n = (q^n - 1) / prod_{d | n, d < n} Phi_d.
pub fn cyclotomic(n: u32) -> PolyQ {
    assert!(n >= 1);
    let mut coeffs = vec![QQ.zero(); n as usize + 1];
    coeffs[0] = QQ.from_int(-1);
    coeffs[n as usize] = QQ.one();
    let mut poly = Poly::from_coeffs(&QQ, coeffs);
    for d in 1..n {
        if n % d == 0 {
            poly = poly.div_exact(&QQ, &cyclotomic(d));
        }
    }
    poly
}

/// The place of Q(q) attached to Phi_n; reduction sends q to a primitive
/// n-th root of unity, whose order kappa equals n.
#[derive(Clone, PartialEq, Debug)]
pub struct CyclotomicPlace {
    pub n: u32,
    pub phi: PolyQ,
}

impl CyclotomicPlace {
    pub fn new(n: u32) -> Self {
        CyclotomicPlace {
            n,
            phi: cyclotomic(n),
        }
    }

    pub fn kappa(&self) -> u32 {
        self.n
    }

    pub fn field(self) -> CycField {
        CycField {
            place: Arc::new(self),
        }
    }
}

/// The field Q(zeta_n), elements stored as residues mod Phi_n.
#[derive(Clone, Debug)]
pub struct CycField {
    pub place: Arc<CyclotomicPlace>,
}

impl CycField {
    pub fn new(n: u32) -> Self {
        CyclotomicPlace::new(n).field()
    }

    /// The image of q, a primitive n-th root of unity.
    pub fn zeta(&self) -> CycElem {
        Poly::var(&QQ).rem(&QQ, &self.place.phi)
    }

    pub fn reduce_poly(&self, p: &PolyQ) -> CycElem {
        p.rem(&QQ, &self.place.phi)
    }

    pub fn from_rat(&self, c: &Rat) -> CycElem {
        Poly::constant(&QQ, c.clone())
    }
}

impl FieldCtx for CycField {
    type Elem = CycElem;

    fn zero(&self) -> CycElem {
        Poly::zero()
    }

    fn one(&self) -> CycElem {
        Poly::one(&QQ)
    }

    fn from_int(&self, n: i64) -> CycElem {
        Poly::constant(&QQ, QQ.from_int(n))
    }

    fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        a.add(&QQ, b)
    }

    fn neg(&self, a: &CycElem) -> CycElem {
        a.neg(&QQ)
    }

    fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        a.mul(&QQ, b).rem(&QQ, &self.place.phi)
    }

    fn inv(&self, a: &CycElem) -> Option<CycElem> {
        if a.is_zero() {
            return None;
        }
        // Phi_n is irreducible over Q, so any nonzero residue is a unit.
        let (g, s, _) = a.xgcd(&QQ, &self.place.phi);
        debug_assert!(g.is_constant());
        let ginv = QQ.inv(&g.leading(&QQ)).unwrap();
        Some(s.scale(&QQ, &ginv).rem(&QQ, &self.place.phi))
    }

    fn is_zero(&self, a: &CycElem) -> bool {
        a.is_zero()
    }

    fn scalar_content<'a>(
        &self,
        elems: impl Iterator<Item = &'a CycElem>,
    ) -> Option<CycElem> {
        QQ.scalar_content(elems.flat_map(|e| e.coeffs.iter()))
            .map(|r| Poly::constant(&QQ, r))
    }

    /// Subresultant (Collins) PRS over Z[zeta][x]. Naive monic Euclid over
    /// Q(zeta) needs one extended gcd mod Phi_n per division step and its
    /// rational heights blow up exponentially; the fraction-free PRS with
    /// scalar descaling keeps coefficients integral and polynomially sized.
    fn poly_gcd(&self, a: &Poly<CycElem>, b: &Poly<CycElem>) -> Poly<CycElem> {
        if a.is_zero() {
            return b.monic(self);
        }
        if b.is_zero() {
            return a.monic(self);
        }
        let mut u = cyc_primitive(a);
        let mut v = cyc_primitive(b);
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        let mut g = self.one();
        let mut h = self.one();
        let gcd = loop {
            let d = u.len() - v.len();
            let (mut r, steps) = cyc_pseudo_rem(self, &u, &v);
            if r.is_empty() {
                cyc_descale(&mut v);
                break v;
            }
            let lb = v.last().unwrap().clone();
            for _ in steps..(d + 1) {
                for x in r.iter_mut() {
                    *x = self.mul(x, &lb);
                }
            }
            // Pseudo-remainders are exactly divisible by g * h^d (up to the
            // scalar units introduced by descaling, harmless in a gcd).
            let divisor = self.mul(&g, &cyc_pow(self, &h, d));
            let dinv = self.inv(&divisor).unwrap();
            for x in r.iter_mut() {
                *x = self.mul(x, &dinv);
            }
            cyc_descale(&mut r);
            u = v;
            v = r;
            g = u.last().unwrap().clone();
            if d > 0 {
                let hinv = self.inv(&cyc_pow(self, &h, d - 1)).unwrap();
                h = self.mul(&cyc_pow(self, &g, d), &hinv);
            }
        };
        Poly::from_coeffs(self, gcd).monic(self)
    }

    fn print(&self, a: &CycElem, ctx_prec: Prec) -> String {
        a.print(&QQ, "q", ctx_prec)
    }
}

/// Coefficients of `a` with the common rational scalar content removed.
fn cyc_primitive(a: &Poly<CycElem>) -> Vec<CycElem> {
    let mut v = a.coeffs.clone();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    cyc_descale(&mut v);
    v
}

/// Divide every rational coefficient by the common scalar content, turning
/// the vector into a primitive integral one. Scalars are units in Q(zeta),
/// so this changes the vector only up to a unit.
fn cyc_descale(v: &mut [CycElem]) {
    if let Some(c) = QQ.scalar_content(v.iter().flat_map(|e| e.coeffs.iter())) {
        let cinv = QQ.inv(&c).unwrap();
        for e in v.iter_mut() {
            *e = e.scale(&QQ, &cinv);
        }
    }
}

/// Pseudo-remainder of `a` by `b` in Q(zeta)[x]: scales by the leading
/// coefficient of `b` instead of inverting it. Also returns the number of
/// scalings applied so the caller can top up to the subresultant count.
fn cyc_pseudo_rem(f: &CycField, a: &[CycElem], b: &[CycElem]) -> (Vec<CycElem>, usize) {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    let mut steps = 0usize;
    while r.len() > db {
        let c = r.pop().unwrap();
        let shift = r.len() - db;
        for x in r.iter_mut() {
            *x = f.mul(x, lb);
        }
        steps += 1;
        for (j, bj) in b.iter().take(db).enumerate() {
            r[shift + j] = f.add(&r[shift + j], &f.neg(&f.mul(&c, bj)));
        }
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    (r, steps)
}

fn cyc_pow(f: &CycField, base: &CycElem, e: usize) -> CycElem {
    let mut out = f.one();
    for _ in 0..e {
        out = f.mul(&out, base);
    }
    out
}

#[derive(Error, Clone, Debug, PartialEq)]
pub enum ReduceError {
    #[error("denominator {witness} vanishes modulo Phi_{n}")]
    BadReduction { n: u32, witness: String },
}

/// Write `f` as N(q,x)/D(q,x) with polynomial, content-normalized
/// coefficients in Q[q], then reduce coefficientwise mod Phi_n.
pub fn reduce_at_place(f: &RatFun, field: &CycField) -> Result<CycFun, ReduceError> {
    let qf = q_field();
    // Common denominator in q over both numerator and denominator of f.
    let mut lcm = Poly::one(&QQ);
    for c in f.num.coeffs.iter().chain(f.den.coeffs.iter()) {
        let g = lcm.gcd(&QQ, &c.den);
        lcm = lcm.mul(&QQ, &c.den.div_exact(&QQ, &g));
    }
    let clear = |p: &Poly<RatQ>| -> Vec<PolyQ> {
        p.coeffs
            .iter()
            .map(|c| c.num.mul(&QQ, &lcm.div_exact(&QQ, &c.den)))
            .collect()
    };
    let mut num_c = clear(&f.num);
    let mut den_c = clear(&f.den);
    // Strip the common content in Q[q] so a shared Phi_n factor cannot fake
    // a bad reduction.
    let mut content = Poly::zero();
    for c in num_c.iter().chain(den_c.iter()) {
        content = content.gcd(&QQ, c);
    }
    if !content.is_constant() {
        for c in num_c.iter_mut().chain(den_c.iter_mut()) {
            *c = c.div_exact(&QQ, &content);
        }
    }
    let num = Poly::from_coeffs(field, num_c.iter().map(|c| field.reduce_poly(c)).collect());
    let den = Poly::from_coeffs(field, den_c.iter().map(|c| field.reduce_poly(c)).collect());
    let cx = FracField::new(field.clone(), "x");
    cx.from_parts(num, den).ok_or_else(|| {
        let den_poly = Poly::from_coeffs(&qf, den_c.iter().map(|c| qf.from_poly(c.clone())).collect());
        ReduceError::BadReduction {
            n: field.place.n,
            witness: den_poly.print(&qf, "x", Prec::Add),
        }
    })
}

/// The field Q(zeta_n)(x) over a place.
pub fn cyc_x_field(field: &CycField) -> CycXField {
    FracField::new(field.clone(), "x")
}
