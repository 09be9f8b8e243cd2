use std::collections::BTreeMap;
use std::fmt;

use super::error::AlgebraError;
use super::poly::{binomial_in, paren};
use super::ring::{Field, Ring};
use super::text::parse_expr;

/// Sparse multivariate polynomial in t_1..t_m.
#[derive(Clone, PartialEq)]
pub struct MPoly<C: Ring> {
    terms: BTreeMap<Vec<u32>, C>,
    nvars: usize,
    ctx: C::Ctx,
}

impl<C: Ring> MPoly<C> {
    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<u32>, C)>, nvars: usize, ctx: C::Ctx) -> Self {
        let mut out = MPoly { terms: BTreeMap::new(), nvars, ctx };
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn constant(c: C, nvars: usize) -> Self {
        let ctx = c.ctx();
        MPoly::from_terms([(vec![0; nvars], c)], nvars, ctx)
    }

    /// The variable t_j (0-based index).
    pub fn var(j: usize, nvars: usize, ctx: &C::Ctx) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        MPoly::from_terms([(e, C::one(ctx))], nvars, ctx.clone())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn coeff_of(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the variable t_j.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|e| e[j]).max().unwrap_or(0)
    }

    /// Unit in the localization at (t_1, ..., t_m): nonzero constant term.
    pub fn is_local_unit(&self) -> bool {
        self.constant_term().try_inverse().is_some()
    }

    pub fn scale(&self, c: &C) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(e, a)| (e.clone(), a.mul(c))), self.nvars, self.ctx.clone())
    }

    /// Hasse derivative φ_{t_j}^(k): t_j^n ↦ C(n,k) t_j^(n-k).
    pub fn hasse(&self, j: usize, k: u32) -> Self {
        MPoly::from_terms(
            self.terms.iter().filter(|(e, _)| e[j] >= k).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[j] -= k;
                (e2, c.mul(&binomial_in::<C>(&self.ctx, e[j] as u64, k as u64)))
            }),
            self.nvars,
            self.ctx.clone(),
        )
    }

    /// Evaluates with t_j ↦ images[j] in a ring T; `embed` maps coefficients.
    pub fn substitute<T: Ring>(&self, images: &[T], embed: impl Fn(&C) -> T, one: T) -> T {
        assert_eq!(images.len(), self.nvars);
        // cache powers of each image
        let mut powers: Vec<Vec<T>> = images.iter().map(|_| vec![one.clone()]).collect();
        let mut acc = one.zero_like();
        for (e, c) in &self.terms {
            let mut term = embed(c);
            for (j, &ej) in e.iter().enumerate() {
                while powers[j].len() <= ej as usize {
                    let next = powers[j].last().unwrap().mul(&images[j]);
                    powers[j].push(next);
                }
                if ej > 0 {
                    term = term.mul(&powers[j][ej as usize]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn map_coeffs<D: Ring>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), f(c))), self.nvars, ctx)
    }

    pub fn var_name(j: usize, nvars: usize) -> String {
        if nvars == 1 {
            "t".to_string()
        } else {
            format!("t{}", j + 1)
        }
    }
}

impl<C: Field> MPoly<C> {
    /// Parses an expression in t (one variable) or t1..tm; `int` maps integers.
    pub fn parse(src: &str, nvars: usize, ctx: &C::Ctx) -> Result<Self, AlgebraError> {
        let e = parse_expr(src)?;
        e.eval(
            &|name: &str| {
                (0..nvars)
                    .find(|&j| Self::var_name(j, nvars) == name || (nvars == 1 && name == "t1"))
                    .map(|j| MPoly::var(j, nvars, ctx))
                    .ok_or_else(|| AlgebraError::Parse(format!("unknown variable '{name}'")))
            },
            &|a: &MPoly<C>, b: &MPoly<C>| {
                // only division by nonzero constants
                if b.terms.len() == 1 && b.total_degree() == Some(0) {
                    Ok(a.scale(&b.constant_term().inv()))
                } else {
                    Err(AlgebraError::Parse("division by a non-constant polynomial".into()))
                }
            },
            &|n| MPoly::constant(C::from_int(ctx, n), nvars),
        )
    }
}

impl<C: Ring> Ring for MPoly<C> {
    type Ctx = (C::Ctx, usize);

    fn ctx(&self) -> Self::Ctx {
        (self.ctx.clone(), self.nvars)
    }
    fn zero((c, n): &Self::Ctx) -> Self {
        MPoly { terms: BTreeMap::new(), nvars: *n, ctx: c.clone() }
    }
    fn one((c, n): &Self::Ctx) -> Self {
        MPoly::constant(C::one(c), *n)
    }
    fn from_int((c, n): &Self::Ctx, v: i64) -> Self {
        MPoly::constant(C::from_int(c, v), *n)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = MPoly { terms: BTreeMap::new(), nvars: self.nvars, ctx: self.ctx.clone() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        self.scale(&C::from_int(&self.ctx, -1))
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() == 1 && self.total_degree() == Some(0) {
            self.constant_term().try_inverse().map(|c| MPoly::constant(c, self.nvars))
        } else {
            None
        }
    }
    fn characteristic(&self) -> u64 {
        C::one(&self.ctx).characteristic()
    }
}

crate::impl_ring_ops!([C: Ring] MPoly<C>);

impl<C: Ring + fmt::Display> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded descending order
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let mon: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(j, &k)| {
                        let v = Self::var_name(j, self.nvars);
                        if k == 1 {
                            v
                        } else {
                            format!("{v}^{k}")
                        }
                    })
                    .collect();
                if mon.is_empty() {
                    paren(c.to_string())
                } else if c.is_one() {
                    mon.join("*")
                } else {
                    format!("{}*{}", paren(c.to_string()), mon.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fp;

    #[test]
    fn parse_and_render_round_trip() {
        let f = MPoly::<Fp>::parse("t1^2*t2 + 2*t2 + 1", 2, &3).unwrap();
        assert_eq!(f.to_string(), "t1^2*t2+2*t2+1");
        assert_eq!(MPoly::<Fp>::parse(&f.to_string(), 2, &3).unwrap(), f);
    }

    #[test]
    fn local_units() {
        let f = MPoly::<Fp>::parse("1+t1", 2, &3).unwrap();
        assert!(f.is_local_unit());
        let g = MPoly::<Fp>::parse("t1*t2", 2, &3).unwrap();
        assert!(!g.is_local_unit());
    }

    #[test]
    fn hasse_partial() {
        let f = MPoly::<Fp>::parse("t1^2*t2", 2, &3).unwrap();
        assert_eq!(f.hasse(0, 2).hasse(1, 1), MPoly::<Fp>::parse("1", 2, &3).unwrap());
        assert_eq!(f.hasse(0, 1), MPoly::<Fp>::parse("2*t1*t2", 2, &3).unwrap());
    }
}
