use std::fmt;
use std::str::FromStr;

use super::error::AlgebraError;
use super::fp::Fp;
use super::poly::{paren, Poly};
use super::ring::{Field, Ring};
use super::text::parse_expr;

/// Element of F_p(t) in canonical form: coprime numerator and monic
/// denominator.
#[derive(Clone, PartialEq)]
pub struct RatFunc {
    num: Poly<Fp>,
    den: Poly<Fp>,
}

impl RatFunc {
    pub fn new(num: Poly<Fp>, den: Poly<Fp>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly<Fp>, den: Poly<Fp>) -> Self {
        let ctx = *den.coeff_ctx();
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(&ctx) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) { (num, den) } else { (num.divrem(&g).0, den.divrem(&g).0) };
        let li = den.leading().unwrap().inv();
        RatFunc { num: num.scale(&li), den: den.scale(&li) }
    }

    /// Makes the denominator monic; numerator and denominator must be coprime.
    fn normalized(num: Poly<Fp>, den: Poly<Fp>) -> Self {
        let li = den.leading().unwrap().inv();
        if li.is_one() {
            RatFunc { num, den }
        } else {
            RatFunc { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn from_poly(num: Poly<Fp>) -> Self {
        let ctx = *num.coeff_ctx();
        RatFunc { num, den: Poly::one(&ctx) }
    }

    /// Builds from integer coefficient lists (ascending degree).
    pub fn from_coeffs(num: &[i64], den: &[i64], p: u32) -> Result<Self, AlgebraError> {
        let mk = |c: &[i64]| Poly::new(c.iter().map(|&v| Fp::new(v, p)).collect(), p);
        RatFunc::new(mk(num), mk(den))
    }

    pub fn constant(c: Fp) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn t(p: u32) -> Self {
        RatFunc::from_poly(Poly::x(&p))
    }

    pub fn num(&self) -> &Poly<Fp> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Fp> {
        &self.den
    }

    pub fn p(&self) -> u32 {
        *self.den.coeff_ctx()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.num.degree().unwrap_or(0) == 0
    }

    /// The constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<Fp> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// Regular at t = 0, i.e. the denominator does not vanish there.
    pub fn is_regular_at_zero(&self) -> bool {
        !self.den.coeff(0).is_zero()
    }

    /// Substitutes t ↦ t^e; equals the e-th power when e is a power of p.
    pub fn inflate(&self, e: usize) -> Self {
        RatFunc { num: self.num.inflate(e), den: self.den.inflate(e) }
    }

    /// Returns g with g^p = self, if it exists.
    pub fn pth_root(&self) -> Result<Self, AlgebraError> {
        let p = self.p() as usize;
        let deflate = |f: &Poly<Fp>| -> Result<Poly<Fp>, AlgebraError> {
            let mut out = Vec::new();
            for (i, c) in f.coeffs().iter().enumerate() {
                if i % p == 0 {
                    out.push(*c);
                } else if !c.is_zero() {
                    return Err(AlgebraError::NotAPthPower);
                }
            }
            Ok(Poly::new(out, p as u32))
        };
        // canonical form of g^p is (num g)^p / (den g)^p, so both parts
        // must be p-th powers on their own
        Ok(RatFunc { num: deflate(&self.num)?, den: deflate(&self.den)? })
    }

    /// Applies `pth_root` repeatedly, `l` times.
    pub fn pth_root_iter(&self, l: u32) -> Result<Self, AlgebraError> {
        (0..l).try_fold(self.clone(), |f, _| f.pth_root())
    }

    /// Coordinates of `self` in the basis 1, t, ..., t^(q-1) of F over F^q,
    /// q = p^l.  Each returned coordinate is already a q-th power.
    pub fn frobenius_expand(&self, l: u32) -> Vec<RatFunc> {
        let q = (self.p() as usize).pow(l);
        self.frobenius_roots(l).into_iter().map(|c| c.inflate(q)).collect()
    }

    /// Like [`frobenius_expand`](Self::frobenius_expand) but returns the
    /// q-th roots of the coordinates: self = Σ_a c_a^q t^a.
    pub fn frobenius_roots(&self, l: u32) -> Vec<RatFunc> {
        let p = self.p();
        let q = (p as usize).pow(l);
        // a/b = a b^(q-1) / b^q and b^q = b(t^q)
        let num = self.num.mul(&self.den.pow(q as u64 - 1));
        let root_den = self.den.clone();
        let mut parts: Vec<Vec<Fp>> = vec![Vec::new(); q];
        for (i, c) in num.coeffs().iter().enumerate() {
            let part = &mut parts[i % q];
            let idx = i / q;
            if part.len() <= idx {
                part.resize(idx + 1, Fp::new(0, p));
            }
            part[idx] = *c;
        }
        parts.into_iter().map(|c| RatFunc::canonical(Poly::new(c, p), root_den.clone())).collect()
    }

    /// Power-series coefficients at t = 0 up to t^n inclusive.
    pub fn series(&self, n: usize) -> Result<Vec<Fp>, AlgebraError> {
        let p = self.p();
        let d0 = self.den.coeff(0);
        let d0i = d0.try_inverse().ok_or(AlgebraError::PoleAtOrigin)?;
        let mut out: Vec<Fp> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.num.coeff(k);
            let dd = self.den.degree().unwrap();
            for i in 1..=dd.min(k) {
                acc = acc.sub(&self.den.coeff(i).mul(&out[k - i]));
            }
            out.push(acc.mul(&d0i));
        }
        debug_assert!(out.iter().all(|c| c.modulus() == p));
        Ok(out)
    }

    /// Components θ^(k)(self), 0 ≤ k ≤ kmax, of the Taylor map f(t) ↦ f(t+T).
    pub fn hasse_series(&self, kmax: usize) -> Vec<RatFunc> {
        // f = a/b; θ(a) = θ(f) θ(b) gives
        // f_k = (a_k - Σ_{i≥1} b_i f_{k-i}) / b, with f_k = P_k / b^(k+1)
        let p = self.p();
        let b = &self.den;
        let mut polys: Vec<Poly<Fp>> = Vec::with_capacity(kmax + 1);
        let mut bpow = vec![Poly::one(&p)];
        for _ in 0..=kmax {
            let last = bpow.last().unwrap().mul(b);
            bpow.push(last);
        }
        let bh: Vec<Poly<Fp>> = (0..=kmax).map(|i| b.hasse(i)).collect();
        for k in 0..=kmax {
            // P_k = a_k b^k - Σ_{i=1..k} b_i P_{k-i} b^(i-1)
            let mut acc = self.num.hasse(k).mul(&bpow[k]);
            for i in 1..=k {
                if bh[i].is_zero() {
                    continue;
                }
                acc = acc.sub(&bh[i].mul(&polys[k - i]).mul(&bpow[i - 1]));
            }
            polys.push(acc);
        }
        polys.into_iter().enumerate().map(|(k, pk)| RatFunc::canonical(pk, bpow[k + 1].clone())).collect()
    }

    /// θ^(k)(self).
    pub fn hasse(&self, k: usize) -> RatFunc {
        self.hasse_series(k).pop().unwrap()
    }

    pub fn parse(src: &str, p: u32) -> Result<Self, AlgebraError> {
        let e = parse_expr(src)?;
        e.eval(
            &|name: &str| {
                if name == "t" {
                    Ok(RatFunc::t(p))
                } else {
                    Err(AlgebraError::Parse(format!("unknown variable '{name}'")))
                }
            },
            &|a: &RatFunc, b: &RatFunc| b.try_inverse().map(|bi| a.mul(&bi)).ok_or(AlgebraError::DivisionByZero),
            &|n| RatFunc::constant(Fp::new(n, p)),
        )
    }

    /// Degree of numerator plus degree of denominator, a rough size measure.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0) + self.den.degree().unwrap_or(0)
    }
}

impl Ring for RatFunc {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.p()
    }
    fn zero(p: &u32) -> Self {
        RatFunc { num: Poly::zero(p), den: Poly::one(p) }
    }
    fn one(p: &u32) -> Self {
        RatFunc { num: Poly::one(p), den: Poly::one(p) }
    }
    fn from_int(p: &u32, n: i64) -> Self {
        RatFunc::constant(Fp::new(n, *p))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::canonical(self.num.add(&o.num), self.den.clone());
        }
        // with g = gcd(b, d): a/b + c/d = (a d' + c b') / (b d'), and any
        // common factor of numerator and denominator divides g
        let g = self.den.gcd(&o.den);
        if g.degree() == Some(0) {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return RatFunc::normalized(num, self.den.mul(&o.den));
        }
        let b1 = self.den.divrem(&g).0;
        let d1 = o.den.divrem(&g).0;
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        if num.is_zero() {
            return RatFunc::zero(&self.p());
        }
        let den = self.den.mul(&d1);
        let h = num.gcd(&g);
        if h.degree() == Some(0) {
            RatFunc::normalized(num, den)
        } else {
            RatFunc::normalized(num.divrem(&h).0, den.divrem(&h).0)
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(&self.p());
        }
        if self.is_polynomial() && o.is_polynomial() {
            let l = self.den.coeff(0).mul(&o.den.coeff(0));
            return RatFunc { num: self.num.mul(&o.num).scale(&l), den: Poly::one(&self.p()) };
        }
        // both inputs are reduced, so only cross factors can cancel
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let div = |x: &Poly<Fp>, g: &Poly<Fp>| if g.degree() == Some(0) { x.clone() } else { x.divrem(g).0 };
        RatFunc::normalized(div(&self.num, &g1).mul(&div(&o.num, &g2)), div(&self.den, &g2).mul(&div(&o.den, &g1)))
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| RatFunc::canonical(self.den.clone(), self.num.clone()))
    }
    fn characteristic(&self) -> u64 {
        self.p() as u64
    }
}

impl Field for RatFunc {}

crate::impl_ring_ops!([] RatFunc);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", paren(self.num.to_string()), paren(self.den.to_string()))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parsing needs the prime, so `FromStr` reads it from a `p:` prefix,
/// e.g. `"2:(t^2+1)/(t^3+t)"`.
impl FromStr for RatFunc {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, body) = s.split_once(':').ok_or_else(|| AlgebraError::Parse("expected '<p>:<expr>'".into()))?;
        let p: u32 = p.trim().parse().map_err(|_| AlgebraError::Parse("bad prime".into()))?;
        super::fp::check_prime(p)?;
        RatFunc::parse(body, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str, p: u32) -> RatFunc {
        RatFunc::parse(s, p).unwrap()
    }

    #[test]
    fn canonical_rendering() {
        let f = rf("(t^2+1)/(t^3+t)", 2);
        // t^2+1 = (t+1)^2 and t^3+t = t(t+1)^2 in char 2
        assert_eq!(f.to_string(), "1/t");
        let g = rf("(t^2+1)/(t^3+t)", 3);
        assert_eq!(g.to_string(), "1/t");
        let h = rf("(t^2+1)/(t^3+t+1)", 2);
        assert_eq!(h.to_string(), "(t^2+1)/(t^3+t+1)");
        assert_eq!(rf(&h.to_string(), 2), h);
        assert_eq!("5:2*t/(3*t+1)".parse::<RatFunc>().unwrap().to_string(), "(4*t)/(t+2)");
    }

    #[test]
    fn pth_root_examples() {
        assert_eq!(rf("t^2+t^4", 2).pth_root().unwrap(), rf("t+t^2", 2));
        assert_eq!(rf("1", 5).pth_root().unwrap(), rf("1", 5));
        assert_eq!(rf("t", 2).pth_root(), Err(AlgebraError::NotAPthPower));
    }

    #[test]
    fn frobenius_expand_examples() {
        let c = rf("t^3", 2).frobenius_expand(1);
        assert_eq!(c, vec![rf("0", 2), rf("t^2", 2)]);
        let c = rf("1/(1+t)", 2).frobenius_expand(1);
        assert_eq!(c, vec![rf("1/(1+t^2)", 2), rf("1/(1+t^2)", 2)]);
        let c = rf("3", 5).frobenius_expand(2);
        assert_eq!(c.len(), 25);
        assert_eq!(c[0], rf("3", 5));
        assert!(c[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn hasse_of_geometric() {
        // θ^(k)(1/(1+t)) = (-1)^k (1+t)^(-(k+1))
        for p in [2, 3, 5] {
            let f = rf("1/(1+t)", p);
            for (k, h) in f.hasse_series(12).into_iter().enumerate() {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let expected = rf(&format!("{sign}*(1+t)^-{}", k + 1), p);
                assert_eq!(h, expected, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn series_of_geometric() {
        let s = rf("1/(1+t)", 3).series(5).unwrap();
        let v: Vec<i64> = s.iter().map(|c| c.signed()).collect();
        assert_eq!(v, vec![1, -1, 1, -1, 1, -1]);
        assert_eq!(rf("1/t", 3).series(2), Err(AlgebraError::PoleAtOrigin));
    }
}
