//! Higher differentials of K[t_1..t_m] and of F_p(t).
//!
//! Dif is modelled as the truncated polynomial algebra over R in the symbols
//! d^(i)t_j.  The universal higher derivation d_R sends t_j to
//! t_j + Σ_i d^(i)t_j, and a.d_Dif is the algebra endomorphism extending
//! a.d_R with d^(i)t_j ↦ Σ_k a^k C(i+k, k) d^(i+k)t_j.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::text::parse_expr;
use crate::algebra::{binomial_in, AlgebraError, Fp, MPoly, Rat, RatFunc, Ring};
use crate::cga::{CgaDescriptor, CgaElement, CgaError, CoeffRule, Coefficient, Factor, PositiveMap, Sym};
use crate::hderiv::HigherDerivation;

/// Domains whose module of higher differentials is free on the d^(i)t_j.
pub trait FreeDomain: Coefficient {}

impl FreeDomain for MPoly<Fp> {}
impl FreeDomain for MPoly<Rat> {}
impl FreeDomain for RatFunc {}

#[derive(Clone, Debug)]
pub struct DifAlgebra<C: FreeDomain> {
    ctx: C::Ctx,
    desc: Arc<CgaDescriptor>,
    m: usize,
}

impl<C: FreeDomain> DifAlgebra<C> {
    pub fn new(ctx: &C::Ctx, order: usize) -> Self {
        let m = C::generator_count(ctx);
        DifAlgebra { ctx: ctx.clone(), desc: CgaDescriptor::dif(m, order), m }
    }

    pub fn order(&self) -> usize {
        self.desc.order()
    }

    pub fn nvars(&self) -> usize {
        self.m
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn descriptor(&self) -> &Arc<CgaDescriptor> {
        &self.desc
    }

    /// d^(i)t_j (j is 0-based); zero above the truncation order.
    pub fn symbol(&self, i: usize, j: usize) -> CgaElement<C> {
        CgaElement::sym(&self.desc, &self.ctx, Sym::d(0, i as u32, j as u16)).expect("valid symbol")
    }

    pub fn scalar(&self, r: C) -> CgaElement<C> {
        CgaElement::scalar(&self.desc, r)
    }

    /// t_j + Σ_{i≥1} a^i d^(i)t_j.
    fn scaled_generator_images(&self, a: &C) -> Vec<CgaElement<C>> {
        C::generators(&self.ctx)
            .into_iter()
            .enumerate()
            .map(|(j, g)| (1..=self.order()).fold(self.scalar(g), |acc, i| acc.add(&self.symbol(i, j).scale(&a.pow(i as u64)))))
            .collect()
    }

    /// d_R(r) = Σ_k d^(k) r.
    pub fn d_r(&self, r: &C) -> Result<CgaElement<C>, CgaError> {
        if self.m == 0 {
            return Ok(self.scalar(r.clone()));
        }
        r.substitute(&self.scaled_generator_images(&C::one(&self.ctx)))
    }

    /// d^(k) r, homogeneous of weight k.
    pub fn d_r_component(&self, r: &C, k: usize) -> Result<CgaElement<C>, CgaError> {
        Ok(self.d_r(r)?.homogeneous(k))
    }

    /// a.d_Dif as a positive endomorphism of Dif.
    pub fn d_dif_scaled(&self, a: &C) -> PositiveMap<C> {
        let n = self.order();
        let mut images = BTreeMap::new();
        for j in 0..self.m {
            for i in 1..=n {
                let img = (0..=n - i).fold(CgaElement::zero(&(self.desc.clone(), self.ctx.clone())), |acc, k| {
                    let c = a.pow(k as u64).mul(&binomial_in::<C>(&self.ctx, (i + k) as u64, k as u64));
                    acc.add(&self.symbol(i + k, j).scale(&c))
                });
                images.insert(Sym::d(0, i as u32, j as u16), img);
            }
        }
        PositiveMap::new(self.desc.clone(), self.desc.clone(), CoeffRule::Substitute(self.scaled_generator_images(a)), images)
            .expect("weight-raising by construction")
    }

    pub fn d_dif(&self) -> PositiveMap<C> {
        self.d_dif_scaled(&C::one(&self.ctx))
    }

    /// The R-linear map Dif → R[[T]] induced by ψ: d^(k)t_j ↦ ψ^(k)(t_j) T^k.
    pub fn evaluation(&self, psi: &HigherDerivation<C>) -> Result<PositiveMap<C>, CgaError> {
        if psi.order() != self.order() || *psi.ctx() != self.ctx {
            return Err(CgaError::DescriptorMismatch(format!(
                "derivation of order {} on a differential algebra of order {}",
                psi.order(),
                self.order()
            )));
        }
        let n = self.order();
        let target = psi.descriptor().clone();
        let mut images = BTreeMap::new();
        for (j, img) in psi.images().iter().enumerate() {
            let comps = img.series_coeffs();
            for (i, c) in comps.iter().enumerate().take(n + 1).skip(1) {
                let mut v = vec![C::zero(&self.ctx); i + 1];
                v[i] = c.clone();
                images.insert(Sym::d(0, i as u32, j as u16), CgaElement::from_series(&target, &self.ctx, v));
            }
        }
        PositiveMap::new(self.desc.clone(), target, CoeffRule::Linear, images)
    }

    pub fn evaluate(&self, psi: &HigherDerivation<C>, omega: &CgaElement<C>) -> Result<CgaElement<C>, CgaError> {
        self.evaluation(psi)?.apply(omega)
    }

    /// Parses text such as "1 + t*d1_t + d1_t^2 * d3_t"; in several variables
    /// the symbols are written d{i}_t{j}.
    pub fn parse(&self, src: &str) -> Result<CgaElement<C>, AlgebraError> {
        let gens: Vec<(String, C)> = C::generators(&self.ctx).into_iter().map(|g| (g.to_string(), g)).collect();
        let ctx = (self.desc.clone(), self.ctx.clone());
        parse_expr(src)?.eval(
            &|name: &str| {
                if let Some((_, g)) = gens.iter().find(|(n, _)| n == name) {
                    return Ok(self.scalar(g.clone()));
                }
                let bad = || AlgebraError::Parse(format!("unknown symbol '{name}'"));
                let rest = name.strip_prefix('d').ok_or_else(bad)?;
                let (order, var) = rest.split_once('_').ok_or_else(bad)?;
                let order: usize = order.parse().map_err(|_| bad())?;
                let j = gens.iter().position(|(n, _)| n == var).ok_or_else(bad)?;
                if order == 0 {
                    return Err(bad());
                }
                Ok(self.symbol(order, j))
            },
            &|a: &CgaElement<C>, b: &CgaElement<C>| b.try_inverse().map(|bi| a.mul(&bi)).ok_or(AlgebraError::DivisionByZero),
            &|n| CgaElement::from_int(&ctx, n),
        )
    }

    /// Every generator of Dif up to the truncation order: t_j and d^(i)t_j.
    pub fn generators(&self) -> Vec<CgaElement<C>> {
        let mut out: Vec<CgaElement<C>> = C::generators(&self.ctx).into_iter().map(|g| self.scalar(g)).collect();
        for s in self.desc.symbols() {
            out.push(CgaElement::sym(&self.desc, &self.ctx, s).expect("own symbol"));
        }
        out
    }
}

impl<C: FreeDomain> PartialEq for DifAlgebra<C> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.desc == other.desc
    }
}

/// Number of variables recorded in a differential descriptor.
pub fn dif_vars(desc: &CgaDescriptor) -> Option<usize> {
    match desc.factors() {
        [Factor::Dif { m }] => Some(*m),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hderiv::phi_t;

    fn fp2(src: &str, nvars: usize, p: u32) -> MPoly<Fp> {
        MPoly::parse(src, nvars, &p).unwrap()
    }

    #[test]
    fn product_rule_examples() {
        let dif = DifAlgebra::<MPoly<Fp>>::new(&(5, 2), 4);
        let d1 = dif.d_r_component(&fp2("t1*t2", 2, 5), 1).unwrap();
        assert_eq!(d1.render(), "t2 * d1_t1 + t1 * d1_t2");
        assert!(dif.d_r_component(&fp2("3", 2, 5), 2).unwrap().is_zero());

        let dif = DifAlgebra::<MPoly<Fp>>::new(&(3, 1), 4);
        let d2 = dif.d_r_component(&fp2("t^2", 1, 3), 2).unwrap();
        assert_eq!(d2.render(), "d1_t^2 + (2*t) * d2_t");
        let dif = DifAlgebra::<MPoly<Fp>>::new(&(2, 1), 4);
        assert_eq!(dif.d_r_component(&fp2("t^2", 1, 2), 2).unwrap().render(), "d1_t^2");
    }

    #[test]
    fn scaled_d_dif_on_first_symbol() {
        let dif = DifAlgebra::<MPoly<Fp>>::new(&(2, 1), 6);
        let one = MPoly::one(&(2, 1));
        let img = dif.d_dif_scaled(&one).apply(&dif.symbol(1, 0)).unwrap();
        assert_eq!(img.render(), "d1_t + d3_t + d5_t");
        let zero = MPoly::zero(&(2, 1));
        assert!(dif.d_dif_scaled(&zero).agrees_with(&PositiveMap::identity(dif.descriptor(), dif.ctx())));
    }

    #[test]
    fn evaluation_of_phi_t() {
        let dif = DifAlgebra::<MPoly<Fp>>::new(&(3, 2), 5);
        let phi = phi_t::<Fp>(&3, 2, 0, 5);
        assert_eq!(dif.evaluate(&phi, &dif.symbol(1, 0)).unwrap().render(), "T");
        assert!(dif.evaluate(&phi, &dif.symbol(2, 0)).unwrap().is_zero());
        assert!(dif.evaluate(&phi, &dif.symbol(1, 1)).unwrap().is_zero());
        let r = fp2("t1^2*t2+1", 2, 3);
        assert_eq!(dif.evaluate(&phi, &dif.scalar(r.clone())).unwrap(), CgaElement::scalar(phi.descriptor(), r.clone()));
        assert_eq!(dif.evaluate(&phi, &dif.d_r(&r).unwrap()).unwrap(), phi.image(&r).unwrap());
    }

    #[test]
    fn parse_round_trip() {
        let dif = DifAlgebra::<MPoly<Fp>>::new(&(3, 2), 6);
        let x = dif.parse("1 + t1*d1_t2 + d1_t1^2 * d3_t1").unwrap();
        assert_eq!(dif.parse(&x.render()).unwrap(), x);
        assert!(dif.parse("d0_t1").is_err());
        assert!(dif.parse("d1_t3").is_err());
        let dif = DifAlgebra::<RatFunc>::new(&2, 4);
        let y = dif.parse("(1/(1+t)) * d2_t + d1_t^2").unwrap();
        assert_eq!(dif.parse(&y.render()).unwrap(), y);
    }

    #[test]
    fn rational_functions_have_differentials() {
        let dif = DifAlgebra::<RatFunc>::new(&3, 3);
        let f = RatFunc::parse("1/(1+t)", 3).unwrap();
        let d1 = dif.d_r_component(&f, 1).unwrap();
        assert_eq!(d1.render(), "(2/(t^2+2*t+1)) * d1_t");
    }
}
