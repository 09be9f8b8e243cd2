//! Exact arithmetic: prime fields, polynomials, rational functions,
//! matrices and Frobenius utilities.

pub mod binomial;
mod error;
mod ext;
mod fp;
mod matrix;
mod mpoly;
mod poly;
mod ratfunc;
mod rational;
mod ring;
pub mod text;

pub use binomial::{binomial_mod_p, padic_binomial};
pub use error::AlgebraError;
pub use ext::{ExtCtx, ExtElem};
pub use fp::{check_prime, Fp};
pub use matrix::{Matrix, SolutionSet};
pub use mpoly::MPoly;
pub(crate) use poly::paren;
pub use poly::{binomial_in, Poly};
pub use ratfunc::RatFunc;
pub use rational::Rat;
pub use ring::{Field, Ring};

/// Solves A x = b over a field: particular solution plus kernel basis.
pub fn solve_linear<C: Field>(a: &Matrix<C>, b: &[C], ctx: &C::Ctx) -> Result<SolutionSet<C>, AlgebraError> {
    a.solve(b, ctx)
}

/// Coordinates of f over F^(p^l) in the basis 1, t, ..., t^(p^l - 1).
pub fn frobenius_expand(f: &RatFunc, l: u32) -> Vec<RatFunc> {
    f.frobenius_expand(l)
}

pub fn pth_root(f: &RatFunc) -> Result<RatFunc, AlgebraError> {
    f.pth_root()
}
