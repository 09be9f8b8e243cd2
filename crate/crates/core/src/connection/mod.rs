//! Higher connections on free modules R^n.
//!
//! A connection is stored by its matrix Ω over Dif with ∇(b_j) = Σ_i Ω_ij ⊗ b_i,
//! so ∇(x) = Ω · d_R(x) on coordinate vectors and the Dif-extension is
//! _Dif∇(v) = Ω · d_Dif(v).

mod constructions;
mod psi;
mod search;

pub use constructions::{coevaluation, evaluation, iota};
pub use psi::PsiConnection;
pub use search::unit_derivative_search;

use thiserror::Error;

use rand::Rng;

use crate::algebra::{binomial_in, AlgebraError, Fp, MPoly, Matrix, Ring};
use crate::cga::{CgaElement, CgaError};
use crate::hderiv::{HderivError, IterFailure, IterativityReport};
use crate::hdiff::{DifAlgebra, FreeDomain};
use crate::random;

#[derive(Debug, Error)]
pub enum ConnectionError {
    #[error(transparent)]
    Cga(#[from] CgaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Hderiv(#[from] HderivError),
    #[error("degree-0 part of the connection matrix is not the identity")]
    NotNormalized,
    #[error("connection matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("input is zero")]
    ZeroInput,
}

pub type DifVec<C> = Vec<CgaElement<C>>;

#[derive(Clone, Debug)]
pub struct HigherConnection<C: FreeDomain> {
    dif: DifAlgebra<C>,
    omega: Matrix<CgaElement<C>>,
}

impl<C: FreeDomain> PartialEq for HigherConnection<C> {
    fn eq(&self, other: &Self) -> bool {
        self.dif == other.dif && self.omega == other.omega
    }
}

/// a.x: the weight-w part of each entry scaled by a^w.
pub(crate) fn scale_weights<C: Ring>(x: &CgaElement<C>, a: &C) -> CgaElement<C> {
    let mut acc = CgaElement::zero(&x.ctx());
    if let Some(top) = x.max_weight() {
        for w in 0..=top {
            acc = acc.add(&x.homogeneous(w).scale(&a.pow(w as u64)));
        }
    }
    acc
}

impl HigherConnection<MPoly<Fp>> {
    /// Ω = I + sparse entries: each term is a random polynomial times one or
    /// two symbols d^(i)t_j of total weight ≤ N.
    pub fn random(rng: &mut impl Rng, dif: &DifAlgebra<MPoly<Fp>>, n: usize, terms: usize) -> Self {
        let (p, m) = *dif.ctx();
        let order = dif.order();
        let mut entry = |diag: bool| {
            let mut acc = dif.scalar(if diag { MPoly::one(&(p, m)) } else { MPoly::zero(&(p, m)) });
            if order == 0 || m == 0 {
                return acc;
            }
            for _ in 0..rng.gen_range(0..=terms) {
                let w1 = rng.gen_range(1..=order);
                let mut mono = dif.symbol(w1, rng.gen_range(0..m));
                if w1 < order && rng.gen_bool(0.3) {
                    mono = mono.mul(&dif.symbol(rng.gen_range(1..=order - w1), rng.gen_range(0..m)));
                }
                acc = acc.add(&mono.scale(&random::mpoly(rng, p, m, 2, 2)));
            }
            acc
        };
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            rows.push((0..n).map(|j| entry(i == j)).collect());
        }
        HigherConnection { dif: dif.clone(), omega: Matrix::from_rows(rows).expect("square") }
    }
}

impl<C: FreeDomain> HigherConnection<C> {
    pub fn new(dif: DifAlgebra<C>, omega: Matrix<CgaElement<C>>) -> Result<Self, ConnectionError> {
        if !omega.is_square() {
            return Err(ConnectionError::NotSquare(omega.rows(), omega.cols()));
        }
        for i in 0..omega.rows() {
            for j in 0..omega.cols() {
                let e = omega.get(i, j);
                if e.descriptor() != dif.descriptor() {
                    return Err(ConnectionError::DescriptorMismatch(format!("entry ({i},{j}) in {}", e.descriptor())));
                }
                let c = e.constant();
                if (i == j && !c.is_one()) || (i != j && !c.is_zero()) {
                    return Err(ConnectionError::NotNormalized);
                }
            }
        }
        Ok(HigherConnection { dif, omega })
    }

    /// Ω = identity.
    pub fn trivial(dif: &DifAlgebra<C>, n: usize) -> Self {
        let ctx = (dif.descriptor().clone(), dif.ctx().clone());
        HigherConnection { dif: dif.clone(), omega: Matrix::identity(n, &ctx) }
    }

    pub fn rank(&self) -> usize {
        self.omega.rows()
    }

    pub fn dif(&self) -> &DifAlgebra<C> {
        &self.dif
    }

    pub fn omega(&self) -> &Matrix<CgaElement<C>> {
        &self.omega
    }

    pub fn order(&self) -> usize {
        self.dif.order()
    }

    fn dif_ctx(&self) -> (std::sync::Arc<crate::cga::CgaDescriptor>, C::Ctx) {
        (self.dif.descriptor().clone(), self.dif.ctx().clone())
    }

    pub(crate) fn same_base(&self, other: &Self) -> Result<(), ConnectionError> {
        if self.dif != other.dif {
            return Err(ConnectionError::DescriptorMismatch(format!("{} vs {}", self.dif.descriptor(), other.dif.descriptor())));
        }
        Ok(())
    }

    /// ∇(x) = Ω · d_R(x).
    pub fn nabla(&self, x: &[C]) -> Result<DifVec<C>, ConnectionError> {
        let dx: Vec<CgaElement<C>> = x.iter().map(|r| self.dif.d_r(r)).collect::<Result<_, _>>()?;
        Ok(self.omega.mul_vec(&dx))
    }

    /// _Dif∇(v) = Ω · d_Dif(v).
    pub fn dif_nabla(&self, v: &[CgaElement<C>]) -> Result<DifVec<C>, ConnectionError> {
        let d = self.dif.d_dif();
        let dv: Vec<CgaElement<C>> = v.iter().map(|x| d.apply(x)).collect::<Result<_, _>>()?;
        Ok(self.omega.mul_vec(&dv))
    }

    /// a._Dif∇(v) = (a.Ω) · (a.d_Dif)(v).
    pub fn dif_nabla_scaled(&self, a: &C, v: &[CgaElement<C>]) -> Result<DifVec<C>, ConnectionError> {
        let d = self.dif.d_dif_scaled(a);
        let dv: Vec<CgaElement<C>> = v.iter().map(|x| d.apply(x)).collect::<Result<_, _>>()?;
        Ok(self.scaled_omega(a).mul_vec(&dv))
    }

    /// a.Ω, the matrix of a.∇.
    pub fn scaled_omega(&self, a: &C) -> Matrix<CgaElement<C>> {
        self.omega.map(|x| scale_weights(x, a))
    }

    /// All components of _Dif∇ on a vector homogeneous of weight w:
    /// out[i] = _Dif∇^(i)(v) for i = 0..=N-w.
    fn components_of_homogeneous(&self, v: &[CgaElement<C>], w: usize) -> Result<Vec<DifVec<C>>, ConnectionError> {
        let full = self.dif_nabla(v)?;
        Ok((0..=self.order().saturating_sub(w)).map(|i| full.iter().map(|x| x.homogeneous(w + i)).collect()).collect())
    }

    /// _Dif∇^(i)(v) for arbitrary v.
    pub fn dif_nabla_component(&self, i: usize, v: &[CgaElement<C>]) -> Result<DifVec<C>, ConnectionError> {
        let ctx = self.dif_ctx();
        let mut acc: DifVec<C> = vec![CgaElement::zero(&ctx); v.len()];
        let top = v.iter().filter_map(|x| x.max_weight()).max().unwrap_or(0);
        for w in 0..=top {
            if w + i > self.order() {
                break;
            }
            let vw: DifVec<C> = v.iter().map(|x| x.homogeneous(w)).collect();
            if vw.iter().all(|x| x.is_zero()) {
                continue;
            }
            let full = self.dif_nabla(&vw)?;
            for (a, f) in acc.iter_mut().zip(full) {
                *a = a.add(&f.homogeneous(w + i));
            }
        }
        Ok(acc)
    }

    /// Homogeneous test vectors: b_k, t_j b_k and d^(i)t_j b_k.
    fn iterativity_samples(&self) -> Vec<(String, usize, DifVec<C>)> {
        let n = self.rank();
        let ctx = self.dif_ctx();
        let unit =
            |k: usize, x: CgaElement<C>| -> DifVec<C> { (0..n).map(|i| if i == k { x.clone() } else { CgaElement::zero(&ctx) }).collect() };
        let mut out = Vec::new();
        let gens = C::generators(self.dif.ctx());
        for k in 0..n {
            out.push((format!("b{}", k + 1), 0, unit(k, CgaElement::one(&ctx))));
            for g in &gens {
                out.push((format!("{g}*b{}", k + 1), 0, unit(k, self.dif.scalar(g.clone()))));
            }
            for j in 0..self.dif.nvars() {
                for i in 1..self.order() {
                    let s = self.dif.symbol(i, j);
                    out.push((format!("{s}*b{}", k + 1), i, unit(k, s)));
                }
            }
        }
        out
    }

    /// Checks _Dif∇^(j)∘_Dif∇^(i) = C(i+j, i) _Dif∇^(i+j) on homogeneous samples.
    ///
    /// _Dif∇ is multiplicative over d_Dif, which already satisfies the rule, so
    /// the basis vectors b_k decide the question; the other samples guard the
    /// implementation of the extension to Dif ⊗ M.
    pub fn is_iterative(&self) -> IterativityReport {
        let n = self.order();
        for (label, w, v) in self.iterativity_samples() {
            let comps = match self.components_of_homogeneous(&v, w) {
                Ok(c) => c,
                Err(e) => return failure(n, 0, 0, label, e.to_string(), String::new()),
            };
            for i in 1..comps.len() {
                let inner = match self.components_of_homogeneous(&comps[i], w + i) {
                    Ok(c) => c,
                    Err(e) => return failure(n, i, 0, label, e.to_string(), String::new()),
                };
                for j in 1..inner.len() {
                    let c = binomial_in::<C>(self.dif.ctx(), (i + j) as u64, i as u64);
                    let rhs: DifVec<C> = comps[i + j].iter().map(|x| x.scale(&c)).collect();
                    if inner[j] != rhs {
                        return failure(n, i, j, label, render_vec(&inner[j]), render_vec(&rhs));
                    }
                }
            }
        }
        IterativityReport { verdict: true, checked_order: n, first_failure: None }
    }

    /// (a._Dif∇)∘(b._Dif∇) = (a+b)._Dif∇ on the basis, for given scalars.
    pub fn scalar_law_holds(&self, a: &C, b: &C) -> Result<bool, ConnectionError> {
        let ab = a.add(b);
        let lhs_cols = self.scaled_omega(b);
        let target = self.scaled_omega(&ab);
        for k in 0..self.rank() {
            let col = lhs_cols.column(k);
            if self.dif_nabla_scaled(a, &col)? != target.column(k) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn failure(n: usize, i: usize, j: usize, generator: String, lhs: String, rhs: String) -> IterativityReport {
    IterativityReport { verdict: false, checked_order: n, first_failure: Some(IterFailure { i, j, generator, lhs, rhs }) }
}

pub(crate) fn render_vec<C: Ring>(v: &[CgaElement<C>]) -> String {
    format!("[{}]", v.iter().map(|x| x.render()).collect::<Vec<_>>().join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, MPoly};

    fn dif(p: u32, m: usize, n: usize) -> DifAlgebra<MPoly<Fp>> {
        DifAlgebra::new(&(p, m), n)
    }

    #[test]
    fn trivial_is_iterative() {
        let d = dif(3, 2, 5);
        assert!(HigherConnection::trivial(&d, 2).is_iterative().verdict);
    }

    #[test]
    fn rank_one_witness_fails() {
        let d = dif(3, 1, 4);
        let omega = Matrix::from_rows(vec![vec![d.parse("1 + d1_t").unwrap()]]).unwrap();
        let c = HigherConnection::new(d, omega).unwrap();
        let rep = c.is_iterative();
        assert!(!rep.verdict);
        let f = rep.first_failure.unwrap();
        assert_eq!((f.i, f.j, f.generator.as_str()), (1, 1, "b1"));
    }

    #[test]
    fn gauge_of_trivial_is_iterative() {
        // b = r e with e horizontal gives Ω = d_R(r) / r
        let d = DifAlgebra::<crate::algebra::RatFunc>::new(&2, 6);
        let r = crate::algebra::RatFunc::parse("1+t", 2).unwrap();
        let dr = d.d_r(&r).unwrap();
        let omega = Matrix::from_rows(vec![vec![dr.scale(&r.try_inverse().unwrap())]]).unwrap();
        let c = HigherConnection::new(d, omega).unwrap();
        assert!(c.is_iterative().verdict);
        let one = crate::algebra::RatFunc::one(&2);
        assert!(c.scalar_law_holds(&one, &one).unwrap());
        assert!(c.scalar_law_holds(&one.zero_like(), &one).unwrap());
    }

    #[test]
    fn rejects_unnormalized() {
        let d = dif(3, 1, 4);
        let omega = Matrix::from_rows(vec![vec![d.parse("2 + d1_t").unwrap()]]).unwrap();
        assert!(matches!(HigherConnection::new(d, omega), Err(ConnectionError::NotNormalized)));
    }
}
