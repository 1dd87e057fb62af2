//! Field contexts: arithmetic is dispatched through a context object so that
//! quotient fields (which need a modulus) and fraction fields (which need a
//! variable name) compose without global state.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Operator precedence levels of the expression grammar, used when a field
/// element is printed as a sub-expression of a polynomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Prec {
    /// Sum or difference of several terms.
    Add,
    /// Product / quotient chain.
    Mul,
    /// Single literal, variable, power, or parenthesized expression.
    Atom,
}

/// A field, presented as a context that performs arithmetic on its element
/// type. All element values are plain data; the context holds whatever is
/// needed to operate on them (a modulus, a base context, a variable name).
pub trait FieldCtx: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// A common scalar factor of `elems` whose removal keeps representations
    /// small (e.g. over Q: gcd of numerators over lcm of denominators, so
    /// dividing by it leaves coprime integers). `None` means "no useful
    /// normalization"; the value must be a unit of the field.
    fn scalar_content<'a>(
        &self,
        _elems: impl Iterator<Item = &'a Self::Elem>,
    ) -> Option<Self::Elem>
    where
        Self::Elem: 'a,
    {
        None
    }

    /// Gcd of two polynomials whose coefficients are themselves polynomials
    /// over this field (low x-degree first, content-stripped). `None` means
    /// "no fast path"; the rationals override this with a modular
    /// evaluation-interpolation gcd for Z[q][x].
    fn bivariate_gcd(
        &self,
        _u: &[crate::poly::Poly<Self::Elem>],
        _v: &[crate::poly::Poly<Self::Elem>],
    ) -> Option<Vec<crate::poly::Poly<Self::Elem>>>
    where
        Self: Sized,
    {
        None
    }

    /// Monic gcd of two polynomials over this field. The default is plain
    /// Euclid; contexts whose elements are fractions override it with a
    /// primitive pseudo-remainder sequence, because naive remainder sequences
    /// suffer catastrophic coefficient swell in towers of fraction fields.
    fn poly_gcd(
        &self,
        a: &crate::poly::Poly<Self::Elem>,
        b: &crate::poly::Poly<Self::Elem>,
    ) -> crate::poly::Poly<Self::Elem>
    where
        Self: Sized,
    {
        crate::poly::gcd_euclid(self, a, b)
    }

    fn pow(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Some(acc)
    }

    /// Render `a` in the expression grammar, parenthesized so that the result
    /// can be substituted into a context of precedence `ctx_prec`.
    fn print(&self, a: &Self::Elem, ctx_prec: Prec) -> String;
}

/// Exact rational number; invariants (reduced, positive denominator) are
/// maintained by `num-rational`.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The field of rational numbers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct QQ;

impl FieldCtx for QQ {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }

    fn one(&self) -> Rat {
        Rat::one()
    }

    fn from_int(&self, n: i64) -> Rat {
        rat_int(n)
    }

    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }

    fn neg(&self, a: &Rat) -> Rat {
        -a
    }

    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }

    fn inv(&self, a: &Rat) -> Option<Rat> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }

    fn scalar_content<'a>(&self, elems: impl Iterator<Item = &'a Rat>) -> Option<Rat> {
        use num_integer::Integer;
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for e in elems {
            num = num.gcd(e.numer());
            den = &den / den.gcd(e.denom()) * e.denom();
        }
        if num.is_zero() || (num.is_one() && den.is_one()) {
            None
        } else {
            Some(Rat::new(num, den))
        }
    }

    /// Primitive pseudo-remainder sequence over the integers: clears
    /// denominators, removes integer content after every pseudo-remainder,
    /// and returns the monic rational gcd. Keeps coefficient heights
    /// polynomial where naive Euclid over Q blows up exponentially.
    fn poly_gcd(
        &self,
        a: &crate::poly::Poly<Rat>,
        b: &crate::poly::Poly<Rat>,
    ) -> crate::poly::Poly<Rat> {
        use crate::poly::Poly;
        if a.is_zero() {
            return b.monic(self);
        }
        if b.is_zero() {
            return a.monic(self);
        }
        let mut u = int_primitive(a);
        let mut v = int_primitive(b);
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        // Modular gcd (Brown): gcd images modulo word-sized primes, CRT
        // recombination, certified by an exact division check. A coprime
        // input pair costs a single F_p gcd. Falls back to the subresultant
        // PRS if the prime supply is exhausted.
        if let Some(g) = modular_int_gcd(&u, &v) {
            let out: Vec<Rat> = g.into_iter().map(Rat::from_integer).collect();
            return Poly::from_coeffs(self, out).monic(self);
        }
        // Collins's subresultant PRS: each pseudo-remainder is exactly
        // divisible by g * h^d, which keeps coefficient growth polynomial
        // without per-step content gcds.
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let d = u.len() - v.len();
            let (mut r, steps) = int_pseudo_rem(&u, &v);
            if r.is_empty() {
                let out: Vec<Rat> = int_strip_content(v).into_iter().map(Rat::from_integer).collect();
                return Poly::from_coeffs(self, out).monic(self);
            }
            let lb = v.last().unwrap();
            for _ in steps..(d + 1) {
                for x in r.iter_mut() {
                    *x = &*x * lb;
                }
            }
            let divisor = &g * int_pow(&h, d);
            for x in r.iter_mut() {
                *x = &*x / &divisor;
            }
            u = v;
            v = r;
            g = u.last().unwrap().clone();
            if d > 0 {
                // h <- g^d / h^(d-1), exact by subresultant theory
                h = int_pow(&g, d) / int_pow(&h, d - 1);
            }
        }
    }

    fn bivariate_gcd(
        &self,
        u: &[crate::poly::Poly<Rat>],
        v: &[crate::poly::Poly<Rat>],
    ) -> Option<Vec<crate::poly::Poly<Rat>>> {
        qq_bivariate_gcd(u, v)
    }

    fn print(&self, a: &Rat, ctx_prec: Prec) -> String {
        let s = if a.denom().is_one() {
            format!("{}", a.numer())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        };
        let own = if a.is_negative() {
            Prec::Add
        } else if a.denom().is_one() {
            Prec::Atom
        } else {
            Prec::Mul
        };
        if own < ctx_prec {
            format!("({})", s)
        } else {
            s
        }
    }
}

/// Clear denominators and divide by the integer content; coefficients low to
/// high, trailing (leading-term) zeros trimmed, empty = zero.
fn int_primitive(p: &crate::poly::Poly<Rat>) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for c in &p.coeffs {
        lcm = &lcm / lcm.gcd(c.denom()) * c.denom();
    }
    let ints: Vec<BigInt> = p.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    int_strip_content(ints)
}

fn int_strip_content(mut v: Vec<BigInt>) -> Vec<BigInt> {
    use num_integer::Integer;
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = content.gcd(c);
        if content.is_one() {
            break;
        }
    }
    if v.last().unwrap().is_negative() {
        content = -content;
    }
    if !content.is_one() {
        for c in &mut v {
            *c = &*c / &content;
        }
    }
    v
}

/// 31-bit primes for modular gcds, generated once.
fn gcd_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let is_prime = |n: u64| -> bool {
            let mut d = 3u64;
            while d * d <= n {
                if n % d == 0 {
                    return false;
                }
                d += 2;
            }
            true
        };
        let mut v = Vec::with_capacity(64);
        let mut c: u64 = (1 << 31) - 1;
        while v.len() < 64 {
            if is_prime(c) {
                v.push(c);
            }
            c -= 2;
        }
        v
    })
}

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, a, p);
        }
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    acc
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow(a, p - 2, p)
}

fn fp_red(x: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = BigInt::from(p);
    let r = ((x % &m) + &m) % &m;
    r.to_u64().unwrap()
}

/// Monic gcd in F_p[x]; coefficients low to high, trailing zeros trimmed.
fn fp_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let db = b.len() - 1;
        let linv = fp_inv(*b.last().unwrap(), p);
        while a.len() > db {
            let c = fp_mul(*a.last().unwrap(), linv, p);
            let shift = a.len() - 1 - db;
            for (j, bj) in b.iter().enumerate() {
                let t = fp_mul(c, *bj, p);
                let x = &mut a[shift + j];
                *x = (*x + p - t) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let linv = fp_inv(l, p);
        for x in a.iter_mut() {
            *x = fp_mul(*x, linv, p);
        }
    }
    a
}

fn int_divides(g: &[BigInt], u: &[BigInt]) -> bool {
    let ctx = QQ;
    let gp = crate::poly::Poly::from_coeffs(
        &ctx,
        g.iter().cloned().map(Rat::from_integer).collect(),
    );
    let up = crate::poly::Poly::from_coeffs(
        &ctx,
        u.iter().cloned().map(Rat::from_integer).collect(),
    );
    let (_, r) = up.div_rem(&ctx, &gp);
    r.is_zero()
}

/// Gcd of two primitive integer polynomials by Brown's modular algorithm:
/// compute monic gcds mod word primes, scale by gcd(lc u, lc v), recombine
/// with the CRT in the symmetric range, and accept once the candidate's
/// primitive part exactly divides both inputs. Unlucky primes (gcd image of
/// too-high degree) are discarded by degree comparison. Returns `None` if
/// the prime supply runs out.
fn modular_int_gcd(u: &[BigInt], v: &[BigInt]) -> Option<Vec<BigInt>> {
    use num_integer::Integer;
    let lu = u.last().unwrap();
    let lv = v.last().unwrap();
    let lcg = lu.gcd(lv);
    let mut modulus = BigInt::one();
    let mut cand: Vec<BigInt> = Vec::new();
    let mut best_deg = usize::MAX;
    let mut stable = false;
    for &p in gcd_primes() {
        if fp_red(lu, p) == 0 || fp_red(lv, p) == 0 {
            continue;
        }
        let up: Vec<u64> = u.iter().map(|c| fp_red(c, p)).collect();
        let vp: Vec<u64> = v.iter().map(|c| fp_red(c, p)).collect();
        let gp = fp_gcd(up, vp, p);
        let d = gp.len() - 1;
        if d == 0 {
            return Some(vec![BigInt::one()]);
        }
        if d > best_deg {
            continue; // unlucky prime
        }
        let s = fp_red(&lcg, p);
        let scaled: Vec<u64> = gp.iter().map(|&c| fp_mul(c, s, p)).collect();
        if d < best_deg {
            // First usable prime, or every previous prime was unlucky.
            best_deg = d;
            modulus = BigInt::from(p);
            cand = scaled
                .iter()
                .map(|&c| {
                    let c = BigInt::from(c);
                    if &c * 2 > modulus { c - &modulus } else { c }
                })
                .collect();
            stable = false;
        } else {
            let minv = fp_inv(fp_red(&modulus, p), p);
            let new_modulus = &modulus * BigInt::from(p);
            let mut changed = false;
            for (c, &r) in cand.iter_mut().zip(scaled.iter()) {
                let rc = fp_red(c, p);
                let diff = (r + p - rc) % p;
                if diff != 0 {
                    let t = fp_mul(diff, minv, p);
                    *c += &modulus * BigInt::from(t);
                    if &*c * 2 > new_modulus {
                        *c -= &new_modulus;
                    }
                    changed = true;
                }
            }
            modulus = new_modulus;
            stable = !changed;
        }
        if stable {
            let g = int_strip_content(cand.clone());
            if int_divides(&g, u) && int_divides(&g, v) {
                return Some(g);
            }
        }
    }
    None
}

/// Evaluate `c` (q-coefficients mod p, low first) at `t` by Horner.
fn fp_eval(c: &[u64], t: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for x in c.iter().rev() {
        acc = (fp_mul(acc, t, p) + x) % p;
    }
    acc
}

/// Dense Newton interpolation in F_p: the unique polynomial of degree
/// < ts.len() through (ts[i], ys[i]), coefficients low first, trimmed.
fn fp_interp(ts: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let k = ts.len();
    let mut dd = ys.to_vec();
    for j in 1..k {
        for i in (j..k).rev() {
            let num = (dd[i] + p - dd[i - 1]) % p;
            let den = (ts[i] + p - ts[i - j]) % p;
            dd[i] = fp_mul(num, fp_inv(den, p), p);
        }
    }
    let mut poly = vec![dd[k - 1]];
    for i in (0..k - 1).rev() {
        poly.insert(0, 0);
        for j in 0..poly.len() - 1 {
            let t = fp_mul(poly[j + 1], ts[i], p);
            poly[j] = (poly[j] + p - t) % p;
        }
        poly[0] = (poly[0] + dd[i]) % p;
    }
    while poly.last() == Some(&0) {
        poly.pop();
    }
    poly
}

/// Gcd in Z[q] including the integer content (`modular_int_gcd` strips it).
fn int_poly_gcd_full(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    use num_integer::Integer;
    let content = |v: &[BigInt]| -> BigInt {
        let mut c = BigInt::zero();
        for x in v {
            c = c.gcd(x);
            if c.is_one() {
                break;
            }
        }
        c
    };
    let ca = content(a);
    let cb = content(b);
    let pa: Vec<BigInt> = a.iter().map(|x| x / &ca).collect();
    let pb: Vec<BigInt> = b.iter().map(|x| x / &cb).collect();
    let prim = if pa.len() >= pb.len() {
        modular_int_gcd(&pa, &pb)?
    } else {
        modular_int_gcd(&pb, &pa)?
    };
    let ic = ca.gcd(&cb);
    Some(prim.into_iter().map(|x| x * &ic).collect())
}

/// Does `h` divide `u` in Q[q][x]? Synthetic division in x with exact
/// coefficient division in Q[q].
fn bivar_divides(h: &[crate::poly::Poly<Rat>], u: &[crate::poly::Poly<Rat>]) -> bool {
    let ctx = QQ;
    let lh = h.last().unwrap();
    let mut r = u.to_vec();
    while r.len() >= h.len() {
        let (qv, rem) = r.last().unwrap().div_rem(&ctx, lh);
        if !rem.is_zero() {
            return false;
        }
        let shift = r.len() - h.len();
        r.pop();
        for (j, hj) in h.iter().take(h.len() - 1).enumerate() {
            r[shift + j] = r[shift + j].sub(&ctx, &qv.mul(&ctx, hj));
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r.is_empty()
}

/// Brown's bivariate modular gcd in Z[q][x] (x the main variable): for each
/// word prime, gcd images in F_p[x] at enough q-evaluation points are
/// interpolated back to F_p[q][x]; images are normalized to leading
/// x-coefficient gcd(lc u, lc v) so the CRT recombination is consistent, and
/// the stabilized candidate is certified by exact division. Returns `None`
/// (caller falls back to the subresultant PRS) on non-integral input or if
/// the prime supply runs out.
fn qq_bivariate_gcd(
    u: &[crate::poly::Poly<Rat>],
    v: &[crate::poly::Poly<Rat>],
) -> Option<Vec<crate::poly::Poly<Rat>>> {
    use crate::poly::Poly;
    let to_int = |p: &Poly<Rat>| -> Option<Vec<BigInt>> {
        let mut out = Vec::with_capacity(p.coeffs.len());
        for c in &p.coeffs {
            if !c.denom().is_one() {
                return None;
            }
            out.push(c.numer().clone());
        }
        while out.last().is_some_and(|x| x.is_zero()) {
            out.pop();
        }
        Some(out)
    };
    let ui: Vec<Vec<BigInt>> = u.iter().map(|p| to_int(p)).collect::<Option<_>>()?;
    let vi: Vec<Vec<BigInt>> = v.iter().map(|p| to_int(p)).collect::<Option<_>>()?;
    // Content-stripped inputs of x-degree 0 are units.
    if ui.len() <= 1 || vi.len() <= 1 {
        return Some(vec![Poly::one(&QQ)]);
    }
    let gamma = int_poly_gcd_full(ui.last().unwrap(), vi.last().unwrap())?;
    let dq = |w: &[Vec<BigInt>]| w.iter().map(|c| c.len().saturating_sub(1)).max().unwrap();
    let bound = gamma.len() - 1 + dq(&ui).min(dq(&vi));
    let points_needed = bound + 1;
    let mut best_dx = usize::MAX;
    let mut modulus = BigInt::one();
    let mut cand: Vec<Vec<BigInt>> = Vec::new();
    let mut stable = false;
    for &p in gcd_primes() {
        if fp_red(ui.last().unwrap().last().unwrap(), p) == 0
            || fp_red(vi.last().unwrap().last().unwrap(), p) == 0
            || fp_red(gamma.last().unwrap(), p) == 0
        {
            continue;
        }
        let red = |w: &[Vec<BigInt>]| -> Vec<Vec<u64>> {
            w.iter()
                .map(|c| c.iter().map(|x| fp_red(x, p)).collect())
                .collect()
        };
        let up = red(&ui);
        let vp = red(&vi);
        let gp: Vec<u64> = gamma.iter().map(|x| fp_red(x, p)).collect();
        // Collect gcd images at q = t until the interpolation is determined.
        let mut cur_dx = usize::MAX;
        let mut ts: Vec<u64> = Vec::new();
        let mut images: Vec<Vec<u64>> = Vec::new();
        for t in 0..p {
            if fp_eval(up.last().unwrap(), t, p) == 0 || fp_eval(vp.last().unwrap(), t, p) == 0 {
                continue;
            }
            let ux: Vec<u64> = up.iter().map(|c| fp_eval(c, t, p)).collect();
            let vx: Vec<u64> = vp.iter().map(|c| fp_eval(c, t, p)).collect();
            let gt = fp_gcd(ux, vx, p);
            let dt = gt.len() - 1;
            if dt == 0 {
                return Some(vec![Poly::one(&QQ)]);
            }
            if dt > cur_dx {
                continue; // unlucky evaluation point
            }
            if dt < cur_dx {
                cur_dx = dt;
                ts.clear();
                images.clear();
            }
            let s = fp_eval(&gp, t, p);
            images.push(gt.iter().map(|&c| fp_mul(c, s, p)).collect());
            ts.push(t);
            if ts.len() == points_needed {
                break;
            }
        }
        if ts.len() < points_needed || cur_dx > best_dx {
            continue;
        }
        // Interpolate each x-coefficient as a polynomial in q, padded to a
        // fixed shape so the CRT is coefficient-aligned across primes.
        let mut hp: Vec<Vec<u64>> = Vec::with_capacity(cur_dx + 1);
        for j in 0..=cur_dx {
            let ys: Vec<u64> = images.iter().map(|g| *g.get(j).unwrap_or(&0)).collect();
            let mut c = fp_interp(&ts, &ys, p);
            c.resize(points_needed, 0);
            hp.push(c);
        }
        if cur_dx < best_dx {
            best_dx = cur_dx;
            modulus = BigInt::from(p);
            cand = hp
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&x| {
                            let x = BigInt::from(x);
                            if &x * 2 > BigInt::from(p) {
                                x - BigInt::from(p)
                            } else {
                                x
                            }
                        })
                        .collect()
                })
                .collect();
            stable = false;
        } else {
            let minv = fp_inv(fp_red(&modulus, p), p);
            let new_modulus = &modulus * BigInt::from(p);
            let mut changed = false;
            for (cc, hc) in cand.iter_mut().zip(hp.iter()) {
                for (c, &r) in cc.iter_mut().zip(hc.iter()) {
                    let rc = fp_red(c, p);
                    let diff = (r + p - rc) % p;
                    if diff != 0 {
                        let t = fp_mul(diff, minv, p);
                        *c += &modulus * BigInt::from(t);
                        if &*c * 2 > new_modulus {
                            *c -= &new_modulus;
                        }
                        changed = true;
                    }
                }
            }
            modulus = new_modulus;
            stable = !changed;
        }
        if stable {
            let h: Vec<Poly<Rat>> = cand
                .iter()
                .map(|c| {
                    Poly::from_coeffs(&QQ, c.iter().cloned().map(Rat::from_integer).collect())
                })
                .collect();
            let hu: Vec<Poly<Rat>> = ui
                .iter()
                .map(|c| {
                    Poly::from_coeffs(&QQ, c.iter().cloned().map(Rat::from_integer).collect())
                })
                .collect();
            let hv: Vec<Poly<Rat>> = vi
                .iter()
                .map(|c| {
                    Poly::from_coeffs(&QQ, c.iter().cloned().map(Rat::from_integer).collect())
                })
                .collect();
            if bivar_divides(&h, &hu) && bivar_divides(&h, &hv) {
                return Some(h);
            }
        }
    }
    None
}

fn int_pow(base: &BigInt, e: usize) -> BigInt {
    let mut out = BigInt::one();
    for _ in 0..e {
        out *= base;
    }
    out
}

/// Pseudo-remainder of `a` by `b`: scales by powers of lc(b) so all
/// arithmetic stays integral. Returns the remainder together with the number
/// of lc(b) scalings applied (the caller tops this up to the full
/// lc(b)^(deg a - deg b + 1) of the textbook pseudo-remainder).
fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, usize) {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    let mut steps = 0usize;
    while r.len() > db {
        let c = r.pop().unwrap();
        let shift = r.len() - db;
        for x in r.iter_mut() {
            *x = &*x * lb;
        }
        steps += 1;
        for (j, bj) in b.iter().take(db).enumerate() {
            r[shift + j] -= &c * bj;
        }
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    (r, steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_printing() {
        let q = QQ;
        assert_eq!(q.print(&rat_int(5), Prec::Atom), "5");
        assert_eq!(q.print(&(rat_int(1) / rat_int(2)), Prec::Mul), "1/2");
        assert_eq!(q.print(&rat_int(-3), Prec::Mul), "(-3)");
        assert_eq!(q.print(&rat_int(-3), Prec::Add), "-3");
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let q = QQ;
        assert_eq!(q.pow(&rat_int(2), -3).unwrap(), rat_int(1) / rat_int(8));
        assert_eq!(q.pow(&rat_int(0), -1), None);
    }
}
