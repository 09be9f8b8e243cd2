//! Higher derivations R → R[[T]] truncated at T^(N+1).
//!
//! A higher derivation is stored by the images of the domain generators
//! (t_1..t_m, or t and y for a simple extension); everything else follows by
//! substitution, which gives the Leibniz rule and the quotient rule for free.

mod newton;

pub use newton::newton_extend;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{binomial_in, AlgebraError, ExtCtx, ExtElem, Field, Fp, MPoly, Rat, RatFunc, Ring};
use crate::cga::{CgaDescriptor, CgaElement, CgaError, CoeffRule, Coefficient, PositiveMap, Sym};

#[derive(Debug, Error)]
pub enum HderivError {
    #[error(transparent)]
    Cga(#[from] CgaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("requested component {k} beyond truncation order {n}")]
    OrderExceeded { k: usize, n: usize },
    #[error("expected {expected} generator images, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("augmentation fails: image of generator {0} does not start with it")]
    Augmentation(usize),
    #[error("extension is not étale: m'(y) is not a unit")]
    NotEtale,
}

/// Domains that can carry a higher derivation, with a text syntax.
pub trait Domain: Coefficient {
    fn kind() -> &'static str;
    fn parse_elem(src: &str, ctx: &Self::Ctx) -> Result<Self, AlgebraError>;
}

impl Domain for MPoly<Fp> {
    fn kind() -> &'static str {
        "poly"
    }
    fn parse_elem(src: &str, ctx: &Self::Ctx) -> Result<Self, AlgebraError> {
        MPoly::parse(src, ctx.1, &ctx.0)
    }
}

impl Domain for MPoly<Rat> {
    fn kind() -> &'static str {
        "poly"
    }
    fn parse_elem(src: &str, ctx: &Self::Ctx) -> Result<Self, AlgebraError> {
        MPoly::parse(src, ctx.1, &ctx.0)
    }
}

impl Domain for RatFunc {
    fn kind() -> &'static str {
        "ratfunc"
    }
    fn parse_elem(src: &str, ctx: &u32) -> Result<Self, AlgebraError> {
        RatFunc::parse(src, *ctx)
    }
}

impl Domain for ExtElem {
    fn kind() -> &'static str {
        "ext"
    }
    fn parse_elem(src: &str, ctx: &Arc<ExtCtx>) -> Result<Self, AlgebraError> {
        ExtElem::parse(src, ctx)
    }
}

#[derive(Clone, Debug)]
pub struct HigherDerivation<C: Coefficient> {
    ctx: C::Ctx,
    desc: Arc<CgaDescriptor>,
    images: Vec<CgaElement<C>>,
}

/// First (i, j, generator) with ψ^(j)(ψ^(i)(x)) ≠ C(i+j, i) ψ^(i+j)(x).
#[derive(Clone, Debug, PartialEq)]
pub struct IterFailure {
    pub i: usize,
    pub j: usize,
    pub generator: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterativityReport {
    pub verdict: bool,
    pub checked_order: usize,
    pub first_failure: Option<IterFailure>,
}

impl IterativityReport {
    /// Scalar-action checks only range over F_p, never over a separable closure.
    pub const LIMITATION: &'static str = "scalar-action laws checked for a,b in F_p only; K^sep is not representable";
}

impl fmt::Display for IterativityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_failure {
            None => write!(f, "iterative up to order {}", self.checked_order),
            Some(x) => write!(
                f,
                "not iterative: at (i,j)=({},{}) on {}: psi^({})(psi^({})({})) = {} but C({},{})*psi^({})({}) = {}",
                x.i,
                x.j,
                x.generator,
                x.j,
                x.i,
                x.generator,
                x.lhs,
                x.i + x.j,
                x.i,
                x.i + x.j,
                x.generator,
                x.rhs
            ),
        }
    }
}

fn generator_name<C: Coefficient>(ctx: &C::Ctx, j: usize) -> String {
    C::generators(ctx)[j].to_string()
}

impl<C: Coefficient> HigherDerivation<C> {
    pub fn new(ctx: &C::Ctx, order: usize, images: Vec<CgaElement<C>>) -> Result<Self, HderivError> {
        let gens = C::generators(ctx);
        if images.len() != gens.len() {
            return Err(HderivError::WrongArity { expected: gens.len(), got: images.len() });
        }
        let desc = CgaDescriptor::power_series(order);
        let mut fixed = Vec::with_capacity(images.len());
        for (j, (img, g)) in images.into_iter().zip(&gens).enumerate() {
            let img = if img.descriptor() == &desc { img } else { img.reembed(&desc)? };
            if img.constant() != *g {
                return Err(HderivError::Augmentation(j));
            }
            fixed.push(img);
        }
        Ok(HigherDerivation { ctx: ctx.clone(), desc, images: fixed })
    }

    /// Builds ψ from coefficient lists: images[j][k] = ψ^(k)(generator j).
    pub fn from_components(ctx: &C::Ctx, order: usize, images: Vec<Vec<C>>) -> Result<Self, HderivError> {
        let desc = CgaDescriptor::power_series(order);
        let imgs = images
            .into_iter()
            .map(|mut v| {
                v.truncate(order + 1);
                CgaElement::from_series(&desc, ctx, v)
            })
            .collect();
        Self::new(ctx, order, imgs)
    }

    pub fn identity(ctx: &C::Ctx, order: usize) -> Self {
        let desc = CgaDescriptor::power_series(order);
        let images = C::generators(ctx).into_iter().map(|g| CgaElement::scalar(&desc, g)).collect();
        HigherDerivation { ctx: ctx.clone(), desc, images }
    }

    pub fn order(&self) -> usize {
        self.desc.order()
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn descriptor(&self) -> &Arc<CgaDescriptor> {
        &self.desc
    }

    pub fn images(&self) -> &[CgaElement<C>] {
        &self.images
    }

    /// ψ(r) as a truncated series.
    pub fn image(&self, r: &C) -> Result<CgaElement<C>, HderivError> {
        if self.images.is_empty() {
            return Ok(CgaElement::scalar(&self.desc, r.clone()));
        }
        Ok(r.substitute(&self.images)?)
    }

    /// ψ^(k)(r).
    pub fn apply(&self, r: &C, k: usize) -> Result<C, HderivError> {
        if k > self.order() {
            return Err(HderivError::OrderExceeded { k, n: self.order() });
        }
        Ok(self.image(r)?.series_coeffs().swap_remove(k))
    }

    /// The coefficientwise extension ψ[[T]] of R[[T]].
    pub fn series_map(&self) -> PositiveMap<C> {
        let t = CgaElement::sym(&self.desc, &self.ctx, Sym::t(0)).expect("T");
        PositiveMap::new(self.desc.clone(), self.desc.clone(), CoeffRule::Substitute(self.images.clone()), [(Sym::t(0), t)].into())
            .expect("positive by construction")
    }

    /// ψ as a map from R (weight 0) into R[[T]].
    pub fn as_map(&self) -> PositiveMap<C> {
        PositiveMap::new(
            CgaDescriptor::trivial(self.order()),
            self.desc.clone(),
            CoeffRule::Substitute(self.images.clone()),
            Default::default(),
        )
        .expect("positive by construction")
    }

    /// self · other = self[[T]] ∘ other.
    pub fn multiply(&self, other: &Self) -> Result<Self, HderivError> {
        if self.desc != other.desc || self.ctx != other.ctx {
            return Err(CgaError::DescriptorMismatch(format!("{} vs {}", self.desc, other.desc)).into());
        }
        let lift = self.series_map();
        let images = other.images.iter().map(|x| lift.apply(x)).collect::<Result<_, _>>()?;
        Ok(HigherDerivation { ctx: self.ctx.clone(), desc: self.desc.clone(), images })
    }

    /// Two-sided inverse, solved degree by degree from ψ'[[T]](ψ(t_j)) = t_j.
    pub fn invert(&self) -> Result<Self, HderivError> {
        let mut inv = Self::identity(&self.ctx, self.order());
        for n in 1..=self.order() {
            let comp = inv.multiply(self)?;
            let mut next = Vec::with_capacity(self.images.len());
            for (cur, err) in inv.images.iter().zip(&comp.images) {
                let mut coeffs = cur.series_coeffs();
                coeffs[n] = coeffs[n].sub(&err.series_coeffs()[n]);
                next.push(CgaElement::from_series(&self.desc, &self.ctx, coeffs));
            }
            inv.images = next;
        }
        Ok(inv)
    }

    /// The scalar action (a.ψ)^(k) = a^k ψ^(k).
    pub fn scale_action(&self, a: &C) -> Self {
        let images = self
            .images
            .iter()
            .map(|x| {
                let coeffs = x.series_coeffs().iter().enumerate().map(|(k, c)| c.mul(&a.pow(k as u64))).collect();
                CgaElement::from_series(&self.desc, &self.ctx, coeffs)
            })
            .collect();
        HigherDerivation { ctx: self.ctx.clone(), desc: self.desc.clone(), images }
    }

    /// Checks ψ^(j)(ψ^(i)(x)) = C(i+j, i) ψ^(i+j)(x) on generators for i + j ≤ n.
    ///
    /// Generators suffice: both sides are the T-components of algebra maps
    /// R → R[[T]][[U]] that agree once they agree on generators, and the
    /// same holds for the unique extension to fractions or étale extensions.
    pub fn is_iterative(&self, n: usize) -> IterativityReport {
        let n = n.min(self.order());
        let comps: Vec<Vec<C>> = self.images.iter().map(|x| x.series_coeffs()).collect();
        // inner[g][i] = ψ(ψ^(i)(x_g)) as a series
        let mut inner: Vec<Vec<Option<Vec<C>>>> = vec![vec![None; n + 1]; comps.len()];
        for total in 2..=n {
            for i in 1..total {
                let j = total - i;
                for (g, c) in comps.iter().enumerate() {
                    if inner[g][i].is_none() {
                        inner[g][i] = Some(match self.image(&c[i]) {
                            Ok(s) => s.series_coeffs(),
                            Err(e) => {
                                return IterativityReport {
                                    verdict: false,
                                    checked_order: n,
                                    first_failure: Some(IterFailure {
                                        i,
                                        j,
                                        generator: generator_name::<C>(&self.ctx, g),
                                        lhs: e.to_string(),
                                        rhs: String::new(),
                                    }),
                                }
                            }
                        });
                    }
                    let lhs = inner[g][i].as_ref().unwrap()[j].clone();
                    let rhs = binomial_in::<C>(&self.ctx, total as u64, i as u64).mul(&c[total]);
                    if lhs != rhs {
                        return IterativityReport {
                            verdict: false,
                            checked_order: n,
                            first_failure: Some(IterFailure {
                                i,
                                j,
                                generator: generator_name::<C>(&self.ctx, g),
                                lhs: lhs.to_string(),
                                rhs: rhs.to_string(),
                            }),
                        };
                    }
                }
            }
        }
        IterativityReport { verdict: true, checked_order: n, first_failure: None }
    }

    /// ψ^(1) on generators, the underlying derivation.
    pub fn first_component(&self) -> Vec<C> {
        self.images.iter().map(|x| x.series_coeffs().swap_remove(1.min(self.order()))).collect()
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.desc == other.desc && self.images == other.images
    }
}

impl<C: Coefficient> fmt::Display for HigherDerivation<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, img) in self.images.iter().enumerate() {
            if j > 0 {
                writeln!(f)?;
            }
            write!(f, "{} |-> {}", generator_name::<C>(&self.ctx, j), img)?;
        }
        Ok(())
    }
}

/// φ_{t_j}: t_j ↦ t_j + T, other generators fixed.
pub fn phi_t<C: Field>(ctx: &C::Ctx, nvars: usize, j: usize, order: usize) -> HigherDerivation<MPoly<C>> {
    let mctx = (ctx.clone(), nvars);
    let images = (0..nvars)
        .map(|i| {
            let mut v = vec![MPoly::var(i, nvars, ctx)];
            if i == j {
                v.push(MPoly::one(&mctx));
            }
            v
        })
        .collect();
    HigherDerivation::from_components(&mctx, order, images).expect("valid images")
}

/// φ_x for the j-th domain generator x: x ↦ x + T, other generators fixed.
pub fn phi_generator<C: Coefficient>(ctx: &C::Ctx, j: usize, order: usize) -> HigherDerivation<C> {
    let images = C::generators(ctx).into_iter().enumerate().map(|(i, g)| if i == j { vec![g, C::one(ctx)] } else { vec![g] }).collect();
    HigherDerivation::from_components(ctx, order, images).expect("valid images")
}

/// φ_t on F_p(t).
pub fn phi_t_ratfunc(p: u32, order: usize) -> HigherDerivation<RatFunc> {
    HigherDerivation::from_components(&p, order, vec![vec![RatFunc::t(p), RatFunc::one(&p)]]).expect("valid images")
}

/// φ_∂ = Σ ∂^k / k! T^k for a derivation ∂ of Q[t_1..t_m] given by ∂(t_j).
pub fn from_derivation(d: &[MPoly<Rat>], order: usize) -> Result<HigherDerivation<MPoly<Rat>>, HderivError> {
    let nvars = d.len();
    let ctx = ((), nvars);
    let apply_d = |f: &MPoly<Rat>| -> MPoly<Rat> { (0..nvars).fold(MPoly::zero(&ctx), |acc, j| acc.add(&f.hasse(j, 1).mul(&d[j]))) };
    let mut images = Vec::with_capacity(nvars);
    for j in 0..nvars {
        let mut cur = MPoly::var(j, nvars, &());
        let mut coeffs = vec![cur.clone()];
        for k in 1..=order {
            cur = apply_d(&cur).scale(&Rat::new(1, k as i64));
            coeffs.push(cur.clone());
        }
        images.push(coeffs);
    }
    HigherDerivation::from_components(&ctx, order, images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp_poly(src: &str, p: u32) -> MPoly<Fp> {
        MPoly::parse(src, 1, &p).unwrap()
    }

    #[test]
    fn phi_t_on_square_in_char_two() {
        let phi = phi_t::<Fp>(&2, 1, 0, 4);
        let t2 = fp_poly("t^2", 2);
        assert!(phi.apply(&t2, 1).unwrap().is_zero());
        assert!(phi.apply(&t2, 2).unwrap().is_one());
        assert!(phi.apply(&fp_poly("1", 2), 3).unwrap().is_zero());
        assert!(matches!(phi.apply(&t2, 5), Err(HderivError::OrderExceeded { .. })));
    }

    #[test]
    fn quotient_rule_on_geometric_series() {
        for p in [2, 3, 5] {
            let phi = phi_t_ratfunc(p, 8);
            let f = RatFunc::parse("1/(1+t)", p).unwrap();
            for k in 0..=8 {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let expect = RatFunc::parse(&format!("{sign}/(1+t)^{}", k + 1), p).unwrap();
                assert_eq!(phi.apply(&f, k).unwrap(), expect, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn denominator_must_be_unit() {
        // t ↦ T sends 1/t to 1/T
        let p = 3;
        let psi = HigherDerivation::<RatFunc> {
            ctx: p,
            desc: CgaDescriptor::power_series(3),
            images: vec![CgaElement::from_series(&CgaDescriptor::power_series(3), &p, vec![RatFunc::zero(&p), RatFunc::one(&p)])],
        };
        let r = psi.image(&RatFunc::parse("1/t", p).unwrap());
        assert!(matches!(r, Err(HderivError::Cga(CgaError::DenominatorNotUnit(_)))));
    }

    #[test]
    fn counterexample_fails_at_one_two() {
        let ctx = (2u32, 1usize);
        let one = MPoly::one(&ctx);
        let zero = MPoly::zero(&ctx);
        let psi = HigherDerivation::from_components(&ctx, 8, vec![vec![fp_poly("t", 2), zero.clone(), zero, one]]).unwrap();
        let rep = psi.is_iterative(8);
        assert!(!rep.verdict);
        let f = rep.first_failure.unwrap();
        assert_eq!((f.i, f.j, f.lhs.as_str(), f.rhs.as_str()), (1, 2, "0", "1"));
    }

    #[test]
    fn phi_t_squared_is_identity_in_char_two() {
        let phi = phi_t::<Fp>(&2, 1, 0, 8);
        let sq = phi.multiply(&phi).unwrap();
        assert!(sq.agrees_with(&HigherDerivation::identity(phi.ctx(), 8)));
    }

    #[test]
    fn inverse_of_phi_t() {
        let phi = phi_t::<Fp>(&5, 2, 1, 10);
        let inv = phi.invert().unwrap();
        let id = HigherDerivation::identity(phi.ctx(), 10);
        assert!(inv.multiply(&phi).unwrap().agrees_with(&id));
        assert!(phi.multiply(&inv).unwrap().agrees_with(&id));
        assert_eq!(inv.images()[1].render(), "t2 + 4 * T");
    }

    #[test]
    fn derivations_over_q() {
        let x = MPoly::<Rat>::parse("t", 1, &()).unwrap();
        let phi = from_derivation(&[MPoly::one(&((), 1))], 6).unwrap();
        assert_eq!(phi.images()[0].render(), "t + T");
        let euler = from_derivation(std::slice::from_ref(&x), 6).unwrap();
        assert_eq!(euler.apply(&x, 2).unwrap().to_string(), "(1/2)*t");
        assert!(euler.is_iterative(6).verdict);
        assert_eq!(euler.first_component(), vec![x.clone()]);
        let zero = from_derivation(&[MPoly::zero(&((), 1))], 6).unwrap();
        assert!(zero.agrees_with(&HigherDerivation::identity(&((), 1), 6)));
    }
}
