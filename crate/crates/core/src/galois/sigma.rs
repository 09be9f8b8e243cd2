//! Laurent polynomials in σ_1..σ_s over F_p(t).
//!
//! The base θ-field of the finite examples is F_p(t)(σ_1, …, σ_s) with the
//! σ_i algebraically independent; every element that occurs is a Laurent
//! polynomial in σ, so this ring carries all coefficients.  Ranks over the
//! fraction field come from fraction-free elimination.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{paren, Fp, RatFunc, Ring};

#[derive(Clone, PartialEq)]
pub struct SigmaPoly {
    p: u32,
    s: usize,
    terms: BTreeMap<Vec<i32>, RatFunc>,
}

impl SigmaPoly {
    pub fn monomial(c: RatFunc, m: Vec<i32>) -> Self {
        let p = c.p();
        let s = m.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SigmaPoly { p, s, terms }
    }

    pub fn from_ratfunc(c: RatFunc, s: usize) -> Self {
        SigmaPoly::monomial(c, vec![0; s])
    }

    pub fn from_fp(c: Fp, s: usize) -> Self {
        SigmaPoly::from_ratfunc(RatFunc::constant(c), s)
    }

    /// σ_i as an element.
    pub fn sigma(p: u32, s: usize, i: usize) -> Self {
        let mut m = vec![0; s];
        m[i] = 1;
        SigmaPoly::monomial(RatFunc::one(&p), m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.s
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[i32]) -> RatFunc {
        self.terms.get(m).cloned().unwrap_or_else(|| RatFunc::zero(&self.p))
    }

    /// The element lies in F_p(t).
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero(&self.p)),
            1 => self.terms.get(&vec![0; self.s]).cloned(),
            _ => None,
        }
    }

    /// The element lies in F_p.
    pub fn as_fp(&self) -> Option<Fp> {
        self.as_ratfunc().and_then(|c| if c.is_zero() { Some(Fp::new(0, self.p)) } else { c.as_constant() })
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).filter(|(_, v)| !v.is_zero()).collect();
        SigmaPoly { p: self.p, s: self.s, terms }
    }

    pub fn shift(&self, by: &[i32]) -> Self {
        let terms = self.terms.iter().map(|(m, v)| (m.iter().zip(by).map(|(a, b)| a + b).collect(), v.clone())).collect();
        SigmaPoly { p: self.p, s: self.s, terms }
    }

    /// σ ↦ 1.
    pub fn specialize_one(&self) -> RatFunc {
        self.terms.values().fold(RatFunc::zero(&self.p), |acc, v| acc.add(v))
    }

    fn leading(&self) -> Option<(&Vec<i32>, &RatFunc)> {
        self.terms.iter().next_back()
    }

    /// q with q·d = self, if the division is exact.
    pub fn exact_div(&self, d: &SigmaPoly) -> Option<SigmaPoly> {
        let (dm, dc) = d.leading()?;
        let dci = dc.try_inverse()?;
        let mut rem = self.clone();
        let mut q = SigmaPoly::zero(&(self.p, self.s));
        // lex order on Z^s is a group order, so each step lowers the leading
        // exponent of the remainder; the bound only guards inexact input
        for _ in 0..=self.terms.len() * d.terms.len().max(1) + 8 {
            let Some((rm, rc)) = rem.leading() else {
                return Some(q);
            };
            let m: Vec<i32> = rm.iter().zip(dm).map(|(a, b)| a - b).collect();
            let t = SigmaPoly::monomial(rc.mul(&dci), m);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        rem.is_zero().then_some(q)
    }
}

impl Ring for SigmaPoly {
    type Ctx = (u32, usize);

    fn ctx(&self) -> Self::Ctx {
        (self.p, self.s)
    }
    fn zero((p, s): &Self::Ctx) -> Self {
        SigmaPoly { p: *p, s: *s, terms: BTreeMap::new() }
    }
    fn one((p, s): &Self::Ctx) -> Self {
        SigmaPoly::from_ratfunc(RatFunc::one(p), *s)
    }
    fn from_int((p, s): &Self::Ctx, n: i64) -> Self {
        SigmaPoly::from_fp(Fp::new(n, *p), *s)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &o.terms {
            let entry = out.terms.entry(m.clone()).or_insert_with(|| RatFunc::zero(&self.p));
            *entry = entry.add(v);
            if entry.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = SigmaPoly::zero(&(self.p, self.s));
        for (m1, v1) in &self.terms {
            for (m2, v2) in &o.terms {
                let m: Vec<i32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out = out.add(&SigmaPoly::monomial(v1.mul(v2), m));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v.neg())).collect();
        SigmaPoly { p: self.p, s: self.s, terms }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, v) = self.terms.iter().next().unwrap();
        Some(SigmaPoly::monomial(v.try_inverse()?, m.iter().map(|a| -a).collect()))
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
}

impl fmt::Display for SigmaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| if e == 1 { format!("s{}", i + 1) } else { format!("s{}^{e}", i + 1) })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{}*{}", paren(c.to_string()), mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SigmaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Rank over Frac(F_p(t)[σ^±]) of the given row vectors, by fraction-free
/// (Bareiss) elimination; every division is exact.
pub fn rank(rows: &[Vec<SigmaPoly>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let ctx = first.first().map(|x| x.ctx());
    let Some(ctx) = ctx else {
        return 0;
    };
    let mut m: Vec<Vec<SigmaPoly>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = first.len();
    let mut prev = SigmaPoly::one(&ctx);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            let f = m[i][c].clone();
            for j in c..cols {
                let v = pivot.mul(&m[i][j]).sub(&f.mul(&m[r][j]));
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// `v` lies in the span of `rows`.
pub fn in_span(rows: &[Vec<SigmaPoly>], v: &[SigmaPoly]) -> bool {
    let mut all = rows.to_vec();
    all.push(v.to_vec());
    rank(&all) == rank(rows)
}

/// Both families span the same subspace.
pub fn same_span(a: &[Vec<SigmaPoly>], b: &[Vec<SigmaPoly>]) -> bool {
    let ra = rank(a);
    if ra != rank(b) {
        return false;
    }
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    rank(&all) == ra
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(c: &str, m: &[i32]) -> SigmaPoly {
        SigmaPoly::monomial(RatFunc::parse(c, 2).unwrap(), m.to_vec())
    }

    #[test]
    fn arithmetic_and_division() {
        let a = sp("t", &[1, 0]).add(&sp("1", &[0, -1]));
        let b = sp("1+t", &[0, 2]).add(&sp("1", &[1, 1]));
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.exact_div(&a), Some(b));
        assert_eq!(sp("1", &[1, 0]).add(&sp("1", &[0, 0])).exact_div(&sp("1", &[0, 1]).add(&sp("1", &[0, 0]))), None);
        assert_eq!(a.specialize_one(), RatFunc::parse("t+1", 2).unwrap());
        assert_eq!(sp("t", &[2, -1]).to_string(), "t*s1^2*s2^-1");
    }

    #[test]
    fn bareiss_rank() {
        let s1 = sp("1", &[1, 0]);
        let one = sp("1", &[0, 0]);
        let zero = SigmaPoly::zero(&(2, 2));
        // rows (σ, 1) and (σ^2, σ) are proportional; (1, σ) is not
        let rows = vec![vec![s1.clone(), one.clone()], vec![s1.mul(&s1), s1.clone()]];
        assert_eq!(rank(&rows), 1);
        assert!(in_span(&rows, &[s1.scale(&RatFunc::t(2)), one.scale(&RatFunc::t(2))]));
        assert!(!in_span(&rows, &[one.clone(), s1.clone()]));
        assert_eq!(rank(&[vec![zero.clone(), zero]]), 0);
        let full = vec![vec![s1.clone(), one.clone()], vec![one, s1]];
        assert_eq!(rank(&full), 2);
    }
}
