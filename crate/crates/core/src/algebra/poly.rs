use std::fmt;

use super::binomial::binomial_mod_p;
use super::ring::{Field, Ring};

/// Dense univariate polynomial, coefficients indexed by degree.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient vector and `degree() == None`.
#[derive(Clone, PartialEq)]
pub struct Poly<C: Ring> {
    coeffs: Vec<C>,
    ctx: C::Ctx,
}

/// C(n, k) as an element of a ring, reduced mod the characteristic.
pub fn binomial_in<C: Ring>(ctx: &C::Ctx, n: u64, k: u64) -> C {
    let sample = C::one(ctx);
    let ch = sample.characteristic();
    if ch > 0 {
        C::from_int(ctx, binomial_mod_p(n, k, ch as u32).value() as i64)
    } else {
        if k > n {
            return C::zero(ctx);
        }
        let mut acc: u128 = 1;
        for i in 0..k.min(n - k) {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        C::from_int(ctx, i64::try_from(acc).expect("binomial exceeds i64"))
    }
}

impl<C: Ring> Poly<C> {
    pub fn new(mut coeffs: Vec<C>, ctx: C::Ctx) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, ctx }
    }

    pub fn constant(c: C) -> Self {
        let ctx = c.ctx();
        Poly::new(vec![c], ctx)
    }

    /// The monomial c·x^k.
    pub fn monomial(c: C, k: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![C::zero(&ctx); k];
        coeffs.push(c);
        Poly::new(coeffs, ctx)
    }

    pub fn x(ctx: &C::Ctx) -> Self {
        Poly::monomial(C::one(ctx), 1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff_ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(&self.ctx), |acc, c| acc.mul(x).add(c))
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect(), self.ctx.clone())
    }

    /// Multiplies by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(&self.ctx); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs, ctx: self.ctx.clone() }
    }

    /// Hasse derivative of order k: x^n ↦ C(n, k) x^(n-k).
    pub fn hasse(&self, k: usize) -> Self {
        let coeffs = (k..self.coeffs.len()).map(|n| self.coeffs[n].mul(&binomial_in::<C>(&self.ctx, n as u64, k as u64))).collect();
        Poly::new(coeffs, self.ctx.clone())
    }

    pub fn derivative(&self) -> Self {
        self.hasse(1)
    }

    /// Substitutes x ↦ x^e.
    pub fn inflate(&self, e: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(&self.ctx); (self.coeffs.len() - 1) * e + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * e] = c.clone();
        }
        Poly::new(coeffs, self.ctx.clone())
    }

    /// Truncates to terms of degree < n.
    pub fn truncate(&self, n: usize) -> Self {
        Poly::new(self.coeffs.iter().take(n).cloned().collect(), self.ctx.clone())
    }

    pub fn map<D: Ring>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect(), ctx)
    }
}

impl<C: Field> Poly<C> {
    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.coeffs[dd].inv();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return (Poly::new(vec![], self.ctx.clone()), self.clone());
        }
        let mut quot = vec![C::zero(&self.ctx); n - dd];
        for i in (dd..n).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].mul(&lead_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = rem[idx].sub(&q.mul(dc));
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot, self.ctx.clone()), Poly::new(rem, self.ctx.clone()))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.coeffs.is_empty() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s·self + t·other = g, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let zero = Poly::new(vec![], self.ctx.clone());
        let one = Poly::constant(C::one(&self.ctx));
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.coeffs.is_empty() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = l.inv();
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
        }
    }
}

impl<C: Ring> Ring for Poly<C> {
    type Ctx = C::Ctx;

    fn ctx(&self) -> C::Ctx {
        self.ctx.clone()
    }
    fn zero(ctx: &C::Ctx) -> Self {
        Poly::new(vec![], ctx.clone())
    }
    fn one(ctx: &C::Ctx) -> Self {
        Poly::new(vec![C::one(ctx)], ctx.clone())
    }
    fn from_int(ctx: &C::Ctx, n: i64) -> Self {
        Poly::new(vec![C::from_int(ctx, n)], ctx.clone())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect(), self.ctx.clone())
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect(), self.ctx.clone())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Poly::zero(&self.ctx);
        }
        let mut out = vec![C::zero(&self.ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out, self.ctx.clone())
    }
    fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect(), self.ctx.clone())
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.coeffs.len() == 1 {
            self.coeffs[0].try_inverse().map(Poly::constant)
        } else {
            None
        }
    }
    fn characteristic(&self) -> u64 {
        C::one(&self.ctx).characteristic()
    }
}

crate::impl_ring_ops!([C: Ring] Poly<C>);

/// Wraps a coefficient rendering in parentheses when it is compound.
pub(crate) fn paren(s: String) -> String {
    if s.contains(['+', '/', '*']) || s[1..].contains('-') {
        format!("({s})")
    } else {
        s
    }
}

/// Renders c_n x^n + ... + c_0 with descending degrees.
pub(crate) fn render_terms<C: Ring + fmt::Display>(coeffs: &[C], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mon = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let part = if i == 0 {
            paren(c.to_string())
        } else if c.is_one() {
            mon
        } else {
            format!("{}*{}", paren(c.to_string()), mon)
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_terms(&self.coeffs, "t"))
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fp;

    fn p2(c: &[i64]) -> Poly<Fp> {
        Poly::new(c.iter().map(|&v| Fp::new(v, 2)).collect(), 2)
    }

    #[test]
    fn gcd_and_ext_gcd() {
        // (t+1)^2 and t^2+t share t+1
        let a = p2(&[1, 0, 1]);
        let b = p2(&[0, 1, 1]);
        assert_eq!(a.gcd(&b), p2(&[1, 1]));
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn divrem_reconstructs() {
        let a = Poly::new((0..7).map(|v| Fp::new(v * v + 3, 5)).collect(), 5);
        let d = Poly::new(vec![Fp::new(2, 5), Fp::new(0, 5), Fp::new(3, 5)], 5);
        let (q, r) = a.divrem(&d);
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn hasse_of_square_in_char_two() {
        let t2 = p2(&[0, 0, 1]);
        assert!(t2.hasse(1).is_zero());
        assert_eq!(t2.hasse(2), p2(&[1]));
    }

    #[test]
    fn render() {
        assert_eq!(p2(&[1, 0, 1]).to_string(), "t^2+1");
        assert_eq!(p2(&[]).to_string(), "0");
        let q = Poly::new(vec![Fp::new(2, 3), Fp::new(1, 3), Fp::new(2, 3)], 3);
        assert_eq!(q.to_string(), "2*t^2+t+2");
    }
}
