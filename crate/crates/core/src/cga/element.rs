use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{CgaDescriptor, CgaError, Sym};
use crate::algebra::{paren, Ring};

/// Product of symbols with exponents, sorted by symbol.
pub type Monomial = Vec<(Sym, u32)>;

fn weight_of(m: &Monomial) -> usize {
    m.iter().map(|(s, e)| s.weight() * *e as usize).sum()
}

fn merge(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Element of a truncated graded algebra over the coefficient ring `C`.
#[derive(Clone)]
pub struct CgaElement<C: Ring> {
    desc: Arc<CgaDescriptor>,
    ctx: C::Ctx,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> PartialEq for CgaElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc && self.terms == other.terms
    }
}

impl<C: Ring> CgaElement<C> {
    pub fn zero_in(desc: &Arc<CgaDescriptor>, ctx: &C::Ctx) -> Self {
        CgaElement { desc: desc.clone(), ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(desc: &Arc<CgaDescriptor>, c: C) -> Self {
        let mut e = Self::zero_in(desc, &c.ctx());
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    pub fn from_terms(desc: &Arc<CgaDescriptor>, ctx: &C::Ctx, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut e = Self::zero_in(desc, ctx);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    /// The symbol `s` as an element (zero when its weight exceeds the order).
    pub fn sym(desc: &Arc<CgaDescriptor>, ctx: &C::Ctx, s: Sym) -> Result<Self, CgaError> {
        if !desc.allows(&s) {
            return Err(CgaError::DescriptorMismatch(format!("symbol {:?} not in {}", s, desc)));
        }
        Ok(Self::from_terms(desc, ctx, [(vec![(s, 1)], C::one(ctx))]))
    }

    /// Σ coeffs[k] T^k in the first power-series factor.
    pub fn from_series(desc: &Arc<CgaDescriptor>, ctx: &C::Ctx, coeffs: Vec<C>) -> Self {
        let t = Sym::t(0);
        Self::from_terms(
            desc,
            ctx,
            coeffs.into_iter().enumerate().map(|(k, c)| {
                let m = if k == 0 { Vec::new() } else { vec![(t, k as u32)] };
                (m, c)
            }),
        )
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() || weight_of(&m) > self.desc.order() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn descriptor(&self) -> &Arc<CgaDescriptor> {
        &self.desc
    }

    pub fn coeff_ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    /// Degree-0 part as a coefficient.
    pub fn constant(&self) -> C {
        self.coeff(&Vec::new())
    }

    /// Coefficients of T^0..T^order in factor 0; other symbols are ignored.
    pub fn series_coeffs(&self) -> Vec<C> {
        let t = Sym::t(0);
        (0..=self.desc.order())
            .map(|k| {
                let m = if k == 0 { Vec::new() } else { vec![(t, k as u32)] };
                self.coeff(&m)
            })
            .collect()
    }

    pub fn homogeneous(&self, k: usize) -> Self {
        Self::from_terms(&self.desc, &self.ctx, self.terms.iter().filter(|(m, _)| weight_of(m) == k).map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Largest weight with a nonzero term.
    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().map(weight_of).max()
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().map(weight_of).min()
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(&self.desc, &self.ctx, self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))))
    }

    pub fn map_coeffs<D: Ring>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> D) -> CgaElement<D> {
        CgaElement::from_terms(&self.desc, ctx, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map_coeffs<D: Ring, E>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> Result<D, E>) -> Result<CgaElement<D>, E> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            out.push((m.clone(), f(c)?));
        }
        Ok(CgaElement::from_terms(&self.desc, ctx, out))
    }

    /// Same terms viewed in another descriptor; symbols must be allowed there.
    pub fn reembed(&self, desc: &Arc<CgaDescriptor>) -> Result<Self, CgaError> {
        for m in self.terms.keys() {
            if let Some((s, _)) = m.iter().find(|(s, _)| !desc.allows(s)) {
                return Err(CgaError::DescriptorMismatch(format!("symbol {:?} not in {}", s, desc)));
            }
        }
        Ok(Self::from_terms(desc, &self.ctx, self.terms.clone()))
    }

    fn retagged(&self, offset: u8) -> impl Iterator<Item = (Monomial, C)> + '_ {
        self.terms.iter().map(move |(m, c)| {
            let m2 = m.iter().map(|(s, e)| (Sym { factor: s.factor + offset, kind: s.kind }, *e)).collect();
            (m2, c.clone())
        })
    }

    /// x ⊗ y in the tensor product descriptor.
    pub fn tensor(&self, other: &Self) -> Result<Self, CgaError> {
        let desc = self.desc.tensor(&other.desc)?;
        let left = Self::from_terms(&desc, &self.ctx, self.terms.clone());
        let right = Self::from_terms(&desc, &self.ctx, other.retagged(self.desc.factors().len() as u8));
        Ok(left.mul(&right))
    }

    /// Fails with `DescriptorMismatch` unless both operands live in the same algebra.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, CgaError> {
        self.same_desc(other)?;
        Ok(self.mul(other))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CgaError> {
        self.same_desc(other)?;
        Ok(Ring::add(self, other))
    }

    fn same_desc(&self, other: &Self) -> Result<(), CgaError> {
        if self.desc != other.desc {
            return Err(CgaError::DescriptorMismatch(format!("{} vs {}", self.desc, other.desc)));
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut items: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        items.sort_by_key(|(m, _)| (weight_of(m), (*m).clone()));
        let parts: Vec<String> = items
            .into_iter()
            .map(|(m, c)| {
                if m.is_empty() {
                    return paren(c.to_string());
                }
                let mono: Vec<String> = m
                    .iter()
                    .map(|(s, e)| {
                        let r = s.render(&self.desc);
                        if *e == 1 {
                            r
                        } else {
                            format!("{r}^{e}")
                        }
                    })
                    .collect();
                let mono = mono.join(" * ");
                if c.is_one() {
                    mono
                } else {
                    format!("{} * {}", paren(c.to_string()), mono)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<C: Ring> Ring for CgaElement<C> {
    type Ctx = (Arc<CgaDescriptor>, C::Ctx);

    fn ctx(&self) -> Self::Ctx {
        (self.desc.clone(), self.ctx.clone())
    }
    fn zero(ctx: &Self::Ctx) -> Self {
        Self::zero_in(&ctx.0, &ctx.1)
    }
    fn one(ctx: &Self::Ctx) -> Self {
        Self::scalar(&ctx.0, C::one(&ctx.1))
    }
    fn from_int(ctx: &Self::Ctx, n: i64) -> Self {
        Self::scalar(&ctx.0, C::from_int(&ctx.1, n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let order = self.desc.order();
        let a: Vec<(usize, &Monomial, &C)> = self.terms.iter().map(|(m, c)| (weight_of(m), m, c)).collect();
        let b: Vec<(usize, &Monomial, &C)> = other.terms.iter().map(|(m, c)| (weight_of(m), m, c)).collect();
        let mut out = Self::zero_in(&self.desc, &self.ctx);
        for (wa, ma, ca) in &a {
            for (wb, mb, cb) in &b {
                if wa + wb > order {
                    continue;
                }
                let m = if ma.is_empty() {
                    (*mb).clone()
                } else if mb.is_empty() {
                    (*ma).clone()
                } else {
                    merge(ma, mb)
                };
                out.add_term(m, ca.mul(cb));
            }
        }
        out
    }
    fn try_inverse(&self) -> Option<Self> {
        // x = x0 (1 + u) with u of positive weight, so x^-1 = x0^-1 Σ (-u)^k
        let x0inv = self.constant().try_inverse()?;
        let u = self.scale(&x0inv).sub(&Self::one(&self.ctx()));
        let neg_u = u.neg();
        let mut acc = Self::one(&self.ctx());
        let mut pw = acc.clone();
        for _ in 0..self.desc.order() {
            pw = pw.mul(&neg_u);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Some(acc.scale(&x0inv))
    }
    fn characteristic(&self) -> u64 {
        C::one(&self.ctx).characteristic()
    }
}

impl<C: Ring> fmt::Display for CgaElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<C: Ring> fmt::Debug for CgaElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fp;

    #[test]
    fn truncation_and_inverse() {
        let d = CgaDescriptor::power_series(5);
        let one_t = CgaElement::from_series(&d, &2, vec![Fp::new(1, 2), Fp::new(1, 2)]);
        let inv = one_t.try_inverse().unwrap();
        assert_eq!(inv.series_coeffs().iter().map(|c| c.value()).collect::<Vec<_>>(), vec![1; 6]);
        assert!(one_t.mul(&inv).is_one());
    }

    #[test]
    fn dif_rendering() {
        let d = CgaDescriptor::dif(1, 6);
        let d1 = CgaElement::<Fp>::sym(&d, &3, Sym::d(0, 1, 0)).unwrap();
        let d3 = CgaElement::<Fp>::sym(&d, &3, Sym::d(0, 3, 0)).unwrap();
        let x = d1.mul(&d1).mul(&d3);
        assert_eq!(x.render(), "d1_t^2 * d3_t");
        assert_eq!(x.max_weight(), Some(5));
        assert!(x.mul(&d1).mul(&d1).is_zero());
    }

    #[test]
    fn tensor_of_series() {
        let d = CgaDescriptor::power_series(3);
        let t = CgaElement::<Fp>::sym(&d, &2, Sym::t(0)).unwrap();
        let x = t.tensor(&t).unwrap();
        assert_eq!(x.render(), "T1 * T2");
        let other = CgaElement::<Fp>::scalar(&CgaDescriptor::power_series(4), Fp::new(1, 2));
        assert!(matches!(t.tensor(&other), Err(CgaError::DescriptorMismatch(_))));
        assert!(matches!(t.checked_mul(&other), Err(CgaError::DescriptorMismatch(_))));
    }
}
