use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CgaDescriptor, CgaElement, CgaError, Sym};
use crate::algebra::{ExtElem, Fp, MPoly, Poly, Rat, RatFunc, Ring};

/// Coefficient rings whose elements can be pushed through a ring map that
/// sends the generators (t_j, and y for simple extensions) to given images.
pub trait Coefficient: Ring {
    fn generator_count(ctx: &Self::Ctx) -> usize;
    fn generators(ctx: &Self::Ctx) -> Vec<Self>;
    fn substitute(&self, images: &[CgaElement<Self>]) -> Result<CgaElement<Self>, CgaError>;
}

fn base_desc<C: Ring>(images: &[CgaElement<C>]) -> Arc<CgaDescriptor> {
    images[0].descriptor().clone()
}

impl Coefficient for Fp {
    fn generator_count(_: &u32) -> usize {
        0
    }
    fn generators(_: &u32) -> Vec<Self> {
        Vec::new()
    }
    fn substitute(&self, _: &[CgaElement<Self>]) -> Result<CgaElement<Self>, CgaError> {
        Err(CgaError::DescriptorMismatch("prime field has no generators to substitute".into()))
    }
}

impl Coefficient for Rat {
    fn generator_count(_: &()) -> usize {
        0
    }
    fn generators(_: &()) -> Vec<Self> {
        Vec::new()
    }
    fn substitute(&self, _: &[CgaElement<Self>]) -> Result<CgaElement<Self>, CgaError> {
        Err(CgaError::DescriptorMismatch("rationals have no generators to substitute".into()))
    }
}

impl<C: Ring> Coefficient for MPoly<C> {
    fn generator_count(ctx: &(C::Ctx, usize)) -> usize {
        ctx.1
    }
    fn generators(ctx: &(C::Ctx, usize)) -> Vec<Self> {
        (0..ctx.1).map(|j| MPoly::var(j, ctx.1, &ctx.0)).collect()
    }
    fn substitute(&self, images: &[CgaElement<Self>]) -> Result<CgaElement<Self>, CgaError> {
        let desc = base_desc(images);
        let ctx = (self.ctx().0, self.nvars());
        let n = self.nvars();
        let one = CgaElement::scalar(&desc, MPoly::one(&ctx));
        Ok(self.substitute(images, |c| CgaElement::scalar(&desc, MPoly::constant(c.clone(), n)), one))
    }
}

/// Horner evaluation of an F_p polynomial at an element of any F_p-algebra.
fn eval_fp_poly<T: Ring>(poly: &Poly<Fp>, x: &CgaElement<T>) -> CgaElement<T> {
    let ctx = x.ctx();
    let mut acc = CgaElement::zero(&ctx);
    for c in poly.coeffs().iter().rev() {
        acc = acc.mul(x).add(&CgaElement::from_int(&ctx, c.value() as i64));
    }
    acc
}

/// Evaluates f(x) for x in a truncated algebra; the denominator must become a unit.
pub fn eval_ratfunc<T: Ring>(f: &RatFunc, x: &CgaElement<T>) -> Result<CgaElement<T>, CgaError> {
    let num = eval_fp_poly(f.num(), x);
    if f.den().degree() == Some(0) {
        let c = T::from_int(x.coeff_ctx(), f.den().coeff(0).value() as i64);
        let inv = c.try_inverse().ok_or_else(|| CgaError::DenominatorNotUnit(f.den().to_string()))?;
        return Ok(num.scale(&inv));
    }
    let den = eval_fp_poly(f.den(), x);
    let inv = den.try_inverse().ok_or_else(|| CgaError::DenominatorNotUnit(den.constant().to_string()))?;
    Ok(num.mul(&inv))
}

impl Coefficient for RatFunc {
    fn generator_count(_: &u32) -> usize {
        1
    }
    fn generators(p: &u32) -> Vec<Self> {
        vec![RatFunc::t(*p)]
    }
    fn substitute(&self, images: &[CgaElement<Self>]) -> Result<CgaElement<Self>, CgaError> {
        eval_ratfunc(self, &images[0])
    }
}

impl Coefficient for ExtElem {
    fn generator_count(_: &Self::Ctx) -> usize {
        2
    }
    fn generators(ctx: &Self::Ctx) -> Vec<Self> {
        vec![ExtElem::from_base(RatFunc::t(ctx.p), ctx), ExtElem::y(ctx)]
    }
    fn substitute(&self, images: &[CgaElement<Self>]) -> Result<CgaElement<Self>, CgaError> {
        let (ti, yi) = (&images[0], &images[1]);
        let mut acc = CgaElement::zero(&ti.ctx());
        for c in self.rep().coeffs().iter().rev() {
            acc = acc.mul(yi).add(&eval_ratfunc(c, ti)?);
        }
        Ok(acc)
    }
}

/// How a positive map acts on degree-0 coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffRule<C: Ring> {
    /// Coefficients are fixed (R-linear maps).
    Linear,
    /// Coefficients are ring elements and their generators go to these images.
    Substitute(Vec<CgaElement<C>>),
}

/// A weight-nondecreasing algebra map, stored by generator images.
#[derive(Clone, Debug)]
pub struct PositiveMap<C: Ring> {
    source: Arc<CgaDescriptor>,
    target: Arc<CgaDescriptor>,
    rule: CoeffRule<C>,
    images: BTreeMap<Sym, CgaElement<C>>,
}

impl<C: Coefficient> PositiveMap<C> {
    pub fn new(
        source: Arc<CgaDescriptor>,
        target: Arc<CgaDescriptor>,
        rule: CoeffRule<C>,
        images: BTreeMap<Sym, CgaElement<C>>,
    ) -> Result<Self, CgaError> {
        if source.order() != target.order() {
            return Err(CgaError::DescriptorMismatch(format!("{} -> {}", source, target)));
        }
        if let CoeffRule::Substitute(imgs) = &rule {
            if imgs.iter().any(|x| **x.descriptor() != *target) {
                return Err(CgaError::DescriptorMismatch("coefficient image outside target".into()));
            }
        }
        for (s, img) in &images {
            if !source.allows(s) {
                return Err(CgaError::DescriptorMismatch(format!("symbol {:?} not in {}", s, source)));
            }
            if **img.descriptor() != *target {
                return Err(CgaError::DescriptorMismatch(format!("image of {:?} outside target", s)));
            }
            if img.min_weight().is_some_and(|w| w < s.weight()) {
                return Err(CgaError::NotPositive(format!("{:?}", s)));
            }
        }
        Ok(PositiveMap { source, target, rule, images })
    }

    /// The identity of an algebra.
    pub fn identity(desc: &Arc<CgaDescriptor>, ctx: &C::Ctx) -> Self {
        let images = desc.symbols().into_iter().map(|s| (s, CgaElement::sym(desc, ctx, s).expect("own symbol"))).collect();
        PositiveMap { source: desc.clone(), target: desc.clone(), rule: CoeffRule::Linear, images }
    }

    pub fn source(&self) -> &Arc<CgaDescriptor> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CgaDescriptor> {
        &self.target
    }

    pub fn rule(&self) -> &CoeffRule<C> {
        &self.rule
    }

    pub fn image(&self, s: &Sym) -> Option<&CgaElement<C>> {
        self.images.get(s)
    }

    fn coeff_image(&self, c: &C) -> Result<CgaElement<C>, CgaError> {
        match &self.rule {
            CoeffRule::Linear => Ok(CgaElement::scalar(&self.target, c.clone())),
            CoeffRule::Substitute(imgs) => {
                if imgs.is_empty() {
                    Ok(CgaElement::scalar(&self.target, c.clone()))
                } else {
                    c.substitute(imgs)
                }
            }
        }
    }

    pub fn apply(&self, x: &CgaElement<C>) -> Result<CgaElement<C>, CgaError> {
        if x.descriptor() != &self.source {
            return Err(CgaError::DescriptorMismatch(format!("argument in {}, map from {}", x.descriptor(), self.source)));
        }
        let ctx = (self.target.clone(), x.coeff_ctx().clone());
        let mut powers: BTreeMap<Sym, Vec<CgaElement<C>>> = BTreeMap::new();
        let mut acc = CgaElement::zero(&ctx);
        for (m, c) in x.terms() {
            let mut term = self.coeff_image(c)?;
            for (s, e) in m {
                let img = self.images.get(s).ok_or_else(|| CgaError::MissingSymbol(format!("{:?}", s)))?;
                let pw = powers.entry(*s).or_insert_with(|| vec![CgaElement::one(&ctx)]);
                while pw.len() <= *e as usize {
                    let next = pw.last().unwrap().mul(img);
                    pw.push(next);
                }
                term = term.mul(&pw[*e as usize]);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// The weight-raising component g^(i): x_j ↦ (g x_j)_{i+j}.
    pub fn component(&self, i: usize, x: &CgaElement<C>) -> Result<CgaElement<C>, CgaError> {
        let ctx = (self.target.clone(), x.coeff_ctx().clone());
        let mut acc = CgaElement::zero(&ctx);
        let Some(top) = x.max_weight() else { return Ok(acc) };
        for j in 0..=top {
            let xj = x.homogeneous(j);
            if xj.is_zero() || i + j > self.target.order() {
                continue;
            }
            acc = acc.add(&self.apply(&xj)?.homogeneous(i + j));
        }
        Ok(acc)
    }

    /// self ∘ g.
    pub fn compose(&self, g: &PositiveMap<C>) -> Result<PositiveMap<C>, CgaError> {
        if g.target != self.source {
            return Err(CgaError::DescriptorMismatch(format!(
                "composing {} -> {} after {} -> {}",
                self.source, self.target, g.source, g.target
            )));
        }
        let rule = match (&g.rule, &self.rule) {
            (CoeffRule::Substitute(imgs), _) => CoeffRule::Substitute(imgs.iter().map(|x| self.apply(x)).collect::<Result<_, _>>()?),
            (CoeffRule::Linear, r) => r.clone(),
        };
        let mut images = BTreeMap::new();
        for (s, img) in &g.images {
            images.insert(*s, self.apply(img)?);
        }
        PositiveMap::new(g.source.clone(), self.target.clone(), rule, images)
    }

    /// The action a.g with (a.g)^(i) = a^i g^(i).
    pub fn scale_action(&self, a: &C) -> PositiveMap<C> {
        let rescale = |x: &CgaElement<C>, shift: usize| {
            let mut acc = CgaElement::zero(&x.ctx());
            let Some(top) = x.max_weight() else { return acc };
            for d in shift..=top {
                acc = acc.add(&x.homogeneous(d).scale(&a.pow((d - shift) as u64)));
            }
            acc
        };
        let rule = match &self.rule {
            CoeffRule::Linear => CoeffRule::Linear,
            CoeffRule::Substitute(imgs) => CoeffRule::Substitute(imgs.iter().map(|x| rescale(x, 0)).collect()),
        };
        let images = self.images.iter().map(|(s, x)| (*s, rescale(x, s.weight()))).collect();
        PositiveMap { source: self.source.clone(), target: self.target.clone(), rule, images }
    }

    /// Equality on generators and coefficient images.
    pub fn agrees_with(&self, other: &PositiveMap<C>) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let ctx = match self.images.values().next().or(other.images.values().next()) {
            Some(x) => x.coeff_ctx().clone(),
            None => match (&self.rule, &other.rule) {
                (CoeffRule::Substitute(a), _) if !a.is_empty() => a[0].coeff_ctx().clone(),
                (_, CoeffRule::Substitute(b)) if !b.is_empty() => b[0].coeff_ctx().clone(),
                _ => return self.rule == other.rule,
            },
        };
        for s in self.source.symbols() {
            let a = self.images.get(&s);
            let b = other.images.get(&s);
            if a != b {
                return false;
            }
        }
        for g in C::generators(&ctx) {
            let x = CgaElement::scalar(&self.source, g);
            if self.apply(&x).ok() != other.apply(&x).ok() {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor(p: u32, n: usize) -> PositiveMap<RatFunc> {
        let d = CgaDescriptor::power_series(n);
        let t = CgaElement::from_series(&d, &p, vec![RatFunc::t(p), RatFunc::one(&p)]);
        let tt = CgaElement::sym(&d, &p, Sym::t(0)).unwrap();
        PositiveMap::new(d.clone(), d, CoeffRule::Substitute(vec![t]), [(Sym::t(0), tt)].into()).unwrap()
    }

    fn reparam(p: u32, n: usize) -> PositiveMap<RatFunc> {
        let d = CgaDescriptor::power_series(n);
        let img = CgaElement::from_series(&d, &p, vec![RatFunc::zero(&p), RatFunc::one(&p), RatFunc::t(p)]);
        PositiveMap::new(d.clone(), d, CoeffRule::Linear, [(Sym::t(0), img)].into()).unwrap()
    }

    #[test]
    fn taylor_map_on_inverse() {
        let p = 2;
        let g = taylor(p, 4);
        let x = CgaElement::scalar(g.source(), RatFunc::parse("1/(1+t)", p).unwrap());
        let y = g.apply(&x).unwrap();
        let expect: Vec<String> = (0..=4).map(|k| RatFunc::parse("1/(1+t)", p).unwrap().hasse(k).to_string()).collect();
        assert_eq!(y.series_coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(), expect);
    }

    #[test]
    fn scale_action_distributes_over_composition() {
        let p = 3;
        let (g, h) = (taylor(p, 6), reparam(p, 6));
        let a = RatFunc::from_int(&p, 2);
        let lhs = h.compose(&g).unwrap().scale_action(&a);
        let rhs = h.scale_action(&a).compose(&g.scale_action(&a)).unwrap();
        assert!(lhs.agrees_with(&rhs));
        assert!(!lhs.agrees_with(&h.compose(&g).unwrap()));
    }

    #[test]
    fn rejects_negative_weight_images() {
        let d = CgaDescriptor::dif(1, 4);
        let low = CgaElement::sym(&d, &2, Sym::d(0, 1, 0)).unwrap();
        let r = PositiveMap::<Fp>::new(d.clone(), d, CoeffRule::Linear, [(Sym::d(0, 2, 0), low)].into());
        assert!(matches!(r, Err(CgaError::NotPositive(_))));
    }

    #[test]
    fn compose_checks_descriptors() {
        let g = taylor(2, 4);
        let h = taylor(2, 5);
        assert!(matches!(h.compose(&g), Err(CgaError::DescriptorMismatch(_))));
    }
}
