//! Dense univariate polynomials over an arbitrary field context.

use crate::field::{FieldCtx, Prec};

/// Plain Euclidean gcd over a field, made monic. Used as the default
/// `FieldCtx::poly_gcd`; fraction-field contexts override it.
pub fn gcd_euclid<C: FieldCtx>(ctx: &C, a: &Poly<C::Elem>, b: &Poly<C::Elem>) -> Poly<C::Elem> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(ctx, &b);
        a = b;
        b = r;
    }
    a.monic(ctx)
}

/// Polynomial with coefficients indexed by degree. The zero polynomial is the
/// empty coefficient list; otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

impl<T: Clone + PartialEq + std::fmt::Debug> Poly<T> {
    pub fn from_coeffs<C: FieldCtx<Elem = T>>(ctx: &C, mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map_or(false, |c| ctx.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant<C: FieldCtx<Elem = T>>(ctx: &C, c: T) -> Self {
        Poly::from_coeffs(ctx, vec![c])
    }

    pub fn one<C: FieldCtx<Elem = T>>(ctx: &C) -> Self {
        Poly::constant(ctx, ctx.one())
    }

    /// The polynomial `c * X^k`.
    pub fn monomial<C: FieldCtx<Elem = T>>(ctx: &C, c: T, k: usize) -> Self {
        if ctx.is_zero(&c) {
            return Poly::zero();
        }
        let mut coeffs = vec![ctx.zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn var<C: FieldCtx<Elem = T>>(ctx: &C) -> Self {
        Poly::monomial(ctx, ctx.one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading<C: FieldCtx<Elem = T>>(&self, ctx: &C) -> T {
        self.coeffs.last().cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn coeff<C: FieldCtx<Elem = T>>(&self, ctx: &C, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(ctx.add(&self.coeff(ctx, k), &other.coeff(ctx, k)));
        }
        Poly::from_coeffs(ctx, coeffs)
    }

    pub fn neg<C: FieldCtx<Elem = T>>(&self, ctx: &C) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| ctx.neg(c)).collect(),
        }
    }

    pub fn sub<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(&coeffs[i + j], &ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(ctx, coeffs)
    }

    pub fn scale<C: FieldCtx<Elem = T>>(&self, ctx: &C, s: &T) -> Self {
        Poly::from_coeffs(ctx, self.coeffs.iter().map(|c| ctx.mul(c, s)).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem<C: FieldCtx<Elem = T>>(&self, ctx: &C, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = ctx.inv(&divisor.leading(ctx)).expect("nonzero leading");
        let mut rem = self.clone();
        let mut quot = vec![ctx.zero(); self.coeffs.len().saturating_sub(d)];
        while let Some(r) = rem.degree() {
            if r < d {
                break;
            }
            let c = ctx.mul(&rem.leading(ctx), &lead_inv);
            quot[r - d] = c.clone();
            // rem -= c * X^(r-d) * divisor
            let mut coeffs = rem.coeffs;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                coeffs[r - d + j] = ctx.sub(&coeffs[r - d + j], &ctx.mul(&c, b));
            }
            rem = Poly::from_coeffs(ctx, coeffs);
        }
        (Poly::from_coeffs(ctx, quot), rem)
    }

    pub fn rem<C: FieldCtx<Elem = T>>(&self, ctx: &C, divisor: &Self) -> Self {
        self.div_rem(ctx, divisor).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact<C: FieldCtx<Elem = T>>(&self, ctx: &C, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(ctx, divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor, dispatched through the context so that
    /// fraction fields can substitute a swell-free algorithm.
    pub fn gcd<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        ctx.poly_gcd(self, other)
    }

    /// Extended gcd: returns (g, s, t) with g = s*self + t*other, g monic.
    pub fn xgcd<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Poly::one(ctx);
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one(ctx);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(ctx, &r1);
            let s = s0.sub(ctx, &q.mul(ctx, &s1));
            let t = t0.sub(ctx, &q.mul(ctx, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = ctx.inv(&r0.leading(ctx)).unwrap();
        (
            r0.scale(ctx, &inv),
            s0.scale(ctx, &inv),
            t0.scale(ctx, &inv),
        )
    }

    pub fn monic<C: FieldCtx<Elem = T>>(&self, ctx: &C) -> Self {
        match self.degree() {
            None => Poly::zero(),
            Some(_) => {
                let inv = ctx.inv(&self.leading(ctx)).unwrap();
                self.scale(ctx, &inv)
            }
        }
    }

    pub fn eval<C: FieldCtx<Elem = T>>(&self, ctx: &C, at: &T) -> T {
        let mut acc = ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = ctx.add(&ctx.mul(&acc, at), c);
        }
        acc
    }

    /// Formal derivative with respect to the polynomial variable.
    pub fn derivative<C: FieldCtx<Elem = T>>(&self, ctx: &C) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| ctx.mul(&ctx.from_int(k as i64), c))
            .collect();
        Poly::from_coeffs(ctx, coeffs)
    }

    /// Substitute `X -> s*X`: multiplies the degree-k coefficient by `s^k`.
    pub fn scale_var<C: FieldCtx<Elem = T>>(&self, ctx: &C, s: &T) -> Self {
        let mut p = ctx.one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                p = ctx.mul(&p, s);
            }
            coeffs.push(ctx.mul(c, &p));
        }
        Poly::from_coeffs(ctx, coeffs)
    }

    pub fn map_coeffs<U, C2, F>(&self, ctx2: &C2, f: F) -> Poly<U>
    where
        U: Clone + PartialEq + std::fmt::Debug,
        C2: FieldCtx<Elem = U>,
        F: Fn(&T) -> U,
    {
        Poly::from_coeffs(ctx2, self.coeffs.iter().map(f).collect())
    }

    /// Render in the expression grammar with the given variable name.
    pub fn print<C: FieldCtx<Elem = T>>(&self, ctx: &C, var: &str, ctx_prec: Prec) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if ctx.is_zero(c) {
                continue;
            }
            let var_part = match k {
                0 => None,
                1 => Some(var.to_string()),
                _ => Some(format!("{}^{}", var, k)),
            };
            let term = match var_part {
                None => ctx.print(c, Prec::Add),
                Some(v) => {
                    if ctx.is_one(c) {
                        v
                    } else if ctx.is_zero(&ctx.add(c, &ctx.one())) {
                        // coefficient -1
                        format!("-{}", v)
                    } else {
                        format!("{}*{}", ctx.print(c, Prec::Mul), v)
                    }
                }
            };
            terms.push(term);
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        let own = if terms.len() > 1 || s.starts_with('-') {
            Prec::Add
        } else if s.contains('*') || s.contains('/') {
            Prec::Mul
        } else {
            Prec::Atom
        };
        if own < ctx_prec {
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

    fn p(coeffs: &[i64]) -> Poly<crate::field::Rat> {
        Poly::from_coeffs(&QQ, coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = p(&[1, 0, -2, 4]);
        let b = p(&[3, 1]);
        let (q, r) = a.div_rem(&QQ, &b);
        assert_eq!(q.mul(&QQ, &b).add(&QQ, &r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_is_monic_common_divisor() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&QQ, &b), p(&[-1, 1]));
    }

    #[test]
    fn xgcd_bezout() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[2, 1]);
        let (g, s, t) = a.xgcd(&QQ, &b);
        let lhs = s.mul(&QQ, &a).add(&QQ, &t.mul(&QQ, &b));
        assert_eq!(lhs, g);
    }

    #[test]
    fn scale_var_substitutes() {
        // x^2 + x, x -> 2x gives 4x^2 + 2x
        let a = p(&[0, 1, 1]);
        assert_eq!(a.scale_var(&QQ, &rat_int(2)), p(&[0, 2, 4]));
    }

    #[test]
    fn printing_terms() {
        assert_eq!(p(&[1, -1, 2]).print(&QQ, "x", Prec::Add), "2*x^2 - x + 1");
        assert_eq!(p(&[0, 1]).print(&QQ, "x", Prec::Atom), "x");
        assert_eq!(Poly::<crate::field::Rat>::zero().print(&QQ, "x", Prec::Add), "0");
    }
}
