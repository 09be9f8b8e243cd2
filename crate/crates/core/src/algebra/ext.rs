use std::fmt;
use std::sync::Arc;

use super::error::AlgebraError;
use super::poly::{render_terms, Poly};
use super::ratfunc::RatFunc;
use super::ring::Ring;
use super::text::parse_expr;

/// Modulus data of a simple extension F_p(t)[y]/(m).
#[derive(Clone, PartialEq, Debug)]
pub struct ExtCtx {
    pub p: u32,
    /// Monic minimal polynomial m(y).
    pub modulus: Poly<RatFunc>,
}

/// Element of F_p(t)[y]/(m), stored as a polynomial in y of degree < deg m.
#[derive(Clone, PartialEq)]
pub struct ExtElem {
    rep: Poly<RatFunc>,
    ctx: Arc<ExtCtx>,
}

impl ExtCtx {
    pub fn new(modulus: Poly<RatFunc>) -> Arc<Self> {
        let p = *modulus.coeff_ctx();
        assert!(modulus.leading().is_some_and(|l| l.is_one()), "modulus must be monic");
        Arc::new(ExtCtx { p, modulus })
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }
}

impl ExtElem {
    pub fn from_poly(rep: Poly<RatFunc>, ctx: &Arc<ExtCtx>) -> Self {
        let rep = rep.divrem(&ctx.modulus).1;
        ExtElem { rep, ctx: ctx.clone() }
    }

    pub fn from_base(c: RatFunc, ctx: &Arc<ExtCtx>) -> Self {
        ExtElem::from_poly(Poly::constant(c), ctx)
    }

    /// The class of y.
    pub fn y(ctx: &Arc<ExtCtx>) -> Self {
        ExtElem::from_poly(Poly::x(&ctx.p), ctx)
    }

    pub fn rep(&self) -> &Poly<RatFunc> {
        &self.rep
    }

    pub fn ext_ctx(&self) -> &Arc<ExtCtx> {
        &self.ctx
    }

    /// Parses an expression in t and y.
    pub fn parse(src: &str, ctx: &Arc<ExtCtx>) -> Result<Self, AlgebraError> {
        parse_expr(src)?.eval(
            &|name: &str| match name {
                "t" => Ok(ExtElem::from_base(RatFunc::t(ctx.p), ctx)),
                "y" => Ok(ExtElem::y(ctx)),
                _ => Err(AlgebraError::Parse(format!("unknown variable '{name}'"))),
            },
            &|a: &ExtElem, b: &ExtElem| b.try_inverse().map(|bi| a.mul(&bi)).ok_or(AlgebraError::DivisionByZero),
            &|n| ExtElem::from_int(ctx, n),
        )
    }
}

impl Ring for ExtElem {
    type Ctx = Arc<ExtCtx>;

    fn ctx(&self) -> Arc<ExtCtx> {
        self.ctx.clone()
    }
    fn zero(ctx: &Arc<ExtCtx>) -> Self {
        ExtElem { rep: Poly::zero(&ctx.p), ctx: ctx.clone() }
    }
    fn one(ctx: &Arc<ExtCtx>) -> Self {
        ExtElem::from_poly(Poly::one(&ctx.p), ctx)
    }
    fn from_int(ctx: &Arc<ExtCtx>, n: i64) -> Self {
        ExtElem::from_poly(Poly::from_int(&ctx.p, n), ctx)
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        ExtElem { rep: self.rep.add(&o.rep), ctx: self.ctx.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        ExtElem { rep: self.rep.sub(&o.rep), ctx: self.ctx.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        ExtElem::from_poly(self.rep.mul(&o.rep), &self.ctx)
    }
    fn neg(&self) -> Self {
        ExtElem { rep: self.rep.neg(), ctx: self.ctx.clone() }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.rep.is_zero() {
            return None;
        }
        let (g, s, _) = self.rep.ext_gcd(&self.ctx.modulus);
        (g.degree() == Some(0)).then(|| ExtElem::from_poly(s, &self.ctx))
    }
    fn characteristic(&self) -> u64 {
        self.ctx.p as u64
    }
}

crate::impl_ring_ops!([] ExtElem);

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_terms(self.rep.coeffs(), "y"))
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
