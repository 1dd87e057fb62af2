//! Fraction fields of polynomial rings. Stacking `FracField` builds the
//! coefficient tower used throughout: `Q(q)`, `Q(q)(x)`, `Q(zeta_n)(x)`.

use crate::field::{FieldCtx, Prec};
use crate::poly::Poly;

/// A normalized quotient of two polynomials: denominator monic and nonzero,
/// gcd(num, den) = 1, zero represented as 0/1. Representation equality is
/// semantic equality.
#[derive(Clone, PartialEq, Debug)]
pub struct Frac<T> {
    pub num: Poly<T>,
    pub den: Poly<T>,
}

/// The field of rational functions over `base` in one variable.
#[derive(Clone, Debug)]
pub struct FracField<C> {
    pub base: C,
    pub var: &'static str,
}

impl<C: FieldCtx> FracField<C> {
    pub fn new(base: C, var: &'static str) -> Self {
        FracField { base, var }
    }

    pub fn from_parts(&self, num: Poly<C::Elem>, den: Poly<C::Elem>) -> Option<Frac<C::Elem>> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Frac {
                num: Poly::zero(),
                den: Poly::one(&self.base),
            });
        }
        // constants are units, so the gcd is trivial when either side is one
        let (num, den) = if num.is_constant() || den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&self.base, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&self.base, &g), den.div_exact(&self.base, &g))
            }
        };
        let lead_inv = self.base.inv(&den.leading(&self.base)).unwrap();
        Some(Frac {
            num: num.scale(&self.base, &lead_inv),
            den: den.scale(&self.base, &lead_inv),
        })
    }

    pub fn from_poly(&self, num: Poly<C::Elem>) -> Frac<C::Elem> {
        Frac {
            num,
            den: Poly::one(&self.base),
        }
    }

    pub fn constant(&self, c: C::Elem) -> Frac<C::Elem> {
        self.from_poly(Poly::constant(&self.base, c))
    }

    pub fn var_elem(&self) -> Frac<C::Elem> {
        self.from_poly(Poly::var(&self.base))
    }

    pub fn is_poly(&self, a: &Frac<C::Elem>) -> bool {
        a.den.is_constant()
    }

    /// Substitute `X -> s*X` for a scalar `s` of the base field.
    pub fn scale_var(&self, a: &Frac<C::Elem>, s: &C::Elem) -> Frac<C::Elem> {
        self.from_parts(
            a.num.scale_var(&self.base, s),
            a.den.scale_var(&self.base, s),
        )
        .unwrap()
    }

    /// Derivative with respect to the fraction-field variable.
    pub fn derivative(&self, a: &Frac<C::Elem>) -> Frac<C::Elem> {
        let b = &self.base;
        let num = a
            .num
            .derivative(b)
            .mul(b, &a.den)
            .sub(b, &a.num.mul(b, &a.den.derivative(b)));
        let den = a.den.mul(b, &a.den);
        self.from_parts(num, den).unwrap()
    }

    /// Evaluate at a base-field point; `None` when the denominator vanishes.
    pub fn eval(&self, a: &Frac<C::Elem>, at: &C::Elem) -> Option<C::Elem> {
        let d = a.den.eval(&self.base, at);
        let dinv = self.base.inv(&d)?;
        Some(self.base.mul(&a.num.eval(&self.base, at), &dinv))
    }

    /// Map coefficients into another field, renormalizing there. `None` when
    /// the image of the denominator is zero.
    pub fn map<C2, F>(&self, ctx2: &FracField<C2>, a: &Frac<C::Elem>, f: F) -> Option<Frac<C2::Elem>>
    where
        C2: FieldCtx,
        F: Fn(&C::Elem) -> C2::Elem,
    {
        let num = a.num.map_coeffs(&ctx2.base, &f);
        let den = a.den.map_coeffs(&ctx2.base, &f);
        ctx2.from_parts(num, den)
    }

    /// Multiply the coefficients of `a` by their common denominator, giving a
    /// primitive vector of `base[t]` polynomials (low degree first, trailing
    /// zeros trimmed).
    fn cleared_primitive(&self, a: &Poly<Frac<C::Elem>>) -> Vec<Poly<C::Elem>> {
        let bs = &self.base;
        let mut lcm = Poly::one(bs);
        for c in &a.coeffs {
            let g = lcm.gcd(bs, &c.den);
            lcm = lcm.div_exact(bs, &g).mul(bs, &c.den);
        }
        let cleared = a
            .coeffs
            .iter()
            .map(|c| c.num.mul(bs, &lcm.div_exact(bs, &c.den)))
            .collect();
        self.strip_content(cleared)
    }

    /// Trim leading zeros, divide out the (monic) polynomial content, and
    /// remove the common scalar content. Scalars are units, so this changes
    /// the vector only up to a unit — harmless inside a gcd computation, and
    /// essential to stop rational-height blowup.
    fn strip_content(&self, mut v: Vec<Poly<C::Elem>>) -> Vec<Poly<C::Elem>> {
        let bs = &self.base;
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        if v.is_empty() {
            return v;
        }
        let mut content = Poly::zero();
        for c in &v {
            content = content.gcd(bs, c);
            if content.is_constant() && !content.is_zero() {
                break;
            }
        }
        if !content.is_constant() {
            for c in &mut v {
                *c = c.div_exact(bs, &content);
            }
        }
        self.descale(&mut v);
        v
    }

    /// Divide every coefficient of every polynomial by the common scalar
    /// content, if the base field reports one.
    fn descale(&self, v: &mut [Poly<C::Elem>]) {
        let bs = &self.base;
        if let Some(u) = bs.scalar_content(v.iter().flat_map(|p| p.coeffs.iter())) {
            let inv = bs.inv(&u).unwrap();
            for p in v.iter_mut() {
                *p = p.scale(bs, &inv);
            }
        }
    }

    /// Pseudo-remainder of `a` by `b` in `base[t][x]`: scales by the leading
    /// coefficient of `b` so no coefficient inversion is needed. Also returns
    /// the number of scalings applied.
    fn pseudo_rem(
        &self,
        a: &[Poly<C::Elem>],
        b: &[Poly<C::Elem>],
    ) -> (Vec<Poly<C::Elem>>, usize) {
        let bs = &self.base;
        let db = b.len() - 1;
        let lb = b.last().unwrap();
        let mut r = a.to_vec();
        let mut steps = 0usize;
        while r.len() > db {
            let c = r.pop().unwrap();
            let shift = r.len() - db;
            for x in r.iter_mut() {
                *x = x.mul(bs, lb);
            }
            steps += 1;
            for (j, bj) in b.iter().take(db).enumerate() {
                r[shift + j] = r[shift + j].sub(bs, &c.mul(bs, bj));
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (r, steps)
    }
}

fn poly_pow<C: FieldCtx>(ctx: &C, base: &Poly<C::Elem>, e: usize) -> Poly<C::Elem> {
    let mut out = Poly::one(ctx);
    for _ in 0..e {
        out = out.mul(ctx, base);
    }
    out
}

impl<C: FieldCtx> FieldCtx for FracField<C> {
    type Elem = Frac<C::Elem>;

    fn zero(&self) -> Self::Elem {
        Frac {
            num: Poly::zero(),
            den: Poly::one(&self.base),
        }
    }

    fn one(&self) -> Self::Elem {
        Frac {
            num: Poly::one(&self.base),
            den: Poly::one(&self.base),
        }
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let bs = &self.base;
        let num = a.num.mul(bs, &b.den).add(bs, &b.num.mul(bs, &a.den));
        let den = a.den.mul(bs, &b.den);
        self.from_parts(num, den).unwrap()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Frac {
            num: a.num.neg(&self.base),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let num = a.num.mul(&self.base, &b.num);
        let den = a.den.mul(&self.base, &b.den);
        self.from_parts(num, den).unwrap()
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.num.is_zero() {
            return None;
        }
        self.from_parts(a.den.clone(), a.num.clone())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.num.is_zero()
    }

    /// Gcd of polynomials whose coefficients are themselves fractions:
    /// clear the coefficient denominators, then run a primitive
    /// pseudo-remainder sequence over the polynomial ring `base[t]`.
    /// Naive Euclid here causes exponential coefficient swell in the tower.
    fn poly_gcd(
        &self,
        a: &Poly<Self::Elem>,
        b: &Poly<Self::Elem>,
    ) -> Poly<Self::Elem> {
        if a.is_zero() {
            return b.monic(self);
        }
        if b.is_zero() {
            return a.monic(self);
        }
        let bs = &self.base;
        let mut u = self.cleared_primitive(a);
        let mut v = self.cleared_primitive(b);
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        // Modular evaluation-interpolation gcd, where the base supports it.
        if let Some(g) = bs.bivariate_gcd(&u, &v) {
            let lifted = Poly::from_coeffs(
                self,
                g.into_iter()
                    .map(|c| Frac {
                        num: c,
                        den: Poly::one(&self.base),
                    })
                    .collect(),
            );
            return lifted.monic(self);
        }
        // Evaluation pre-check: specializing t can only increase the gcd
        // degree, so if the gcd of the evaluated polynomials is constant the
        // generic gcd is 1. This skips the expensive PRS in the common
        // coprime case. Evaluation points are tried until neither leading
        // coefficient vanishes.
        for t in 2..12 {
            let at = bs.from_int(t);
            if bs.is_zero(&u.last().unwrap().eval(bs, &at))
                || bs.is_zero(&v.last().unwrap().eval(bs, &at))
            {
                continue;
            }
            let eu = Poly::from_coeffs(bs, u.iter().map(|p| p.eval(bs, &at)).collect());
            let ev = Poly::from_coeffs(bs, v.iter().map(|p| p.eval(bs, &at)).collect());
            if eu.gcd(bs, &ev).is_constant() {
                return Poly::one(self);
            }
            break;
        }
        // Collins's subresultant PRS over base[t]: pseudo-remainders are
        // exactly divisible by g * h^d, avoiding per-step content gcds.
        let mut g = Poly::one(bs);
        let mut h = Poly::one(bs);
        let g = loop {
            let d = u.len() - v.len();
            let (mut r, steps) = self.pseudo_rem(&u, &v);
            if r.is_empty() {
                break self.strip_content(v);
            }
            let lb = v.last().unwrap().clone();
            for _ in steps..(d + 1) {
                for x in r.iter_mut() {
                    *x = x.mul(bs, &lb);
                }
            }
            let divisor = g.mul(bs, &poly_pow(bs, &h, d));
            for x in r.iter_mut() {
                *x = x.div_exact(bs, &divisor);
            }
            self.descale(&mut r);
            u = v;
            v = r;
            g = u.last().unwrap().clone();
            if d > 0 {
                h = poly_pow(bs, &g, d).div_exact(bs, &poly_pow(bs, &h, d - 1));
            }
        };
        let lifted = Poly::from_coeffs(
            self,
            g.into_iter()
                .map(|c| Frac {
                    num: c,
                    den: Poly::one(&self.base),
                })
                .collect(),
        );
        lifted.monic(self)
    }

    fn print(&self, a: &Self::Elem, ctx_prec: Prec) -> String {
        if a.den.is_constant() {
            return a.num.print(&self.base, self.var, ctx_prec);
        }
        let s = format!(
            "{}/{}",
            a.num.print(&self.base, self.var, Prec::Atom),
            a.den.print(&self.base, self.var, Prec::Atom)
        );
        if ctx_prec > Prec::Mul {
            format!("({})", s)
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, QQ};

    type F = FracField<QQ>;

    fn ctx() -> F {
        FracField::new(QQ, "x")
    }

    fn poly(coeffs: &[i64]) -> Poly<crate::field::Rat> {
        Poly::from_coeffs(&QQ, coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn normalization_cancels_and_makes_monic() {
        let f = ctx();
        // (2x^2 - 2) / (2x - 2) = x + 1
        let a = f.from_parts(poly(&[-2, 0, 2]), poly(&[-2, 2])).unwrap();
        assert_eq!(a, f.from_poly(poly(&[1, 1])));
    }

    #[test]
    fn field_axioms_spot_check() {
        let f = ctx();
        let a = f.from_parts(poly(&[1, 2]), poly(&[0, 0, 3])).unwrap();
        let b = f.from_parts(poly(&[5]), poly(&[-1, 1])).unwrap();
        let prod = f.mul(&a, &b);
        let back = f.mul(&prod, &f.inv(&b).unwrap());
        assert_eq!(back, a);
        assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
    }

    #[test]
    fn derivative_quotient_rule() {
        let f = ctx();
        // d/dx (1/x) = -1/x^2
        let a = f.from_parts(poly(&[1]), poly(&[0, 1])).unwrap();
        let d = f.derivative(&a);
        let expect = f.from_parts(poly(&[-1]), poly(&[0, 0, 1])).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn print_fraction() {
        let f = ctx();
        let a = f.from_parts(poly(&[1]), poly(&[-1, 1])).unwrap();
        assert_eq!(f.print(&a, Prec::Mul), "1/(x - 1)");
    }
}
