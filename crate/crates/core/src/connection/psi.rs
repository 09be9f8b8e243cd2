use crate::algebra::{binomial_in, Matrix};
use crate::cga::CgaElement;
use crate::hderiv::{HigherDerivation, IterFailure, IterativityReport};
use crate::hdiff::FreeDomain;

use super::{ConnectionError, HigherConnection};

/// ∇_ψ = (ψ~ ⊗ id) ∘ ∇, stored as the matrix Ω_ψ over R[[T]].
#[derive(Clone, Debug)]
pub struct PsiConnection<C: FreeDomain> {
    psi: HigherDerivation<C>,
    omega: Matrix<CgaElement<C>>,
}

impl<C: FreeDomain> HigherConnection<C> {
    pub fn apply_psi(&self, psi: &HigherDerivation<C>) -> Result<PsiConnection<C>, ConnectionError> {
        let ev = self.dif().evaluation(psi)?;
        let omega = self.omega().try_map(|x| ev.apply(x))?;
        Ok(PsiConnection { psi: psi.clone(), omega })
    }
}

impl<C: FreeDomain> PsiConnection<C> {
    pub fn omega(&self) -> &Matrix<CgaElement<C>> {
        &self.omega
    }

    pub fn psi(&self) -> &HigherDerivation<C> {
        &self.psi
    }

    pub fn rank(&self) -> usize {
        self.omega.rows()
    }

    /// The matrix of ∇_ψ^(k) on the basis.
    pub fn component(&self, k: usize) -> Matrix<C> {
        self.omega.map(|x| x.series_coeffs().swap_remove(k))
    }

    /// ∇_ψ(x) = Ω_ψ · ψ(x) as a vector of series.
    pub fn apply(&self, x: &[C]) -> Result<Vec<CgaElement<C>>, ConnectionError> {
        let px: Vec<CgaElement<C>> = x.iter().map(|r| self.psi.image(r)).collect::<Result<_, _>>()?;
        Ok(self.omega.mul_vec(&px))
    }

    /// All components ∇_ψ^(k)(x), k = 0..=N.
    pub fn components(&self, x: &[C]) -> Result<Vec<Vec<C>>, ConnectionError> {
        let series: Vec<Vec<C>> = self.apply(x)?.iter().map(|s| s.series_coeffs()).collect();
        Ok((0..=self.psi.order()).map(|k| series.iter().map(|s| s[k].clone()).collect()).collect())
    }

    /// ∇_ψ^(j)∘∇_ψ^(i) = C(i+j, i) ∇_ψ^(i+j) on b_k and t b_k.
    pub fn is_iterative(&self) -> Result<IterativityReport, ConnectionError> {
        let n = self.psi.order();
        let ctx = self.psi.ctx().clone();
        let mut samples: Vec<(String, Vec<C>)> = Vec::new();
        for k in 0..self.rank() {
            let unit = |x: C| -> Vec<C> { (0..self.rank()).map(|i| if i == k { x.clone() } else { C::zero(&ctx) }).collect() };
            samples.push((format!("b{}", k + 1), unit(C::one(&ctx))));
            for g in C::generators(&ctx) {
                samples.push((format!("{g}*b{}", k + 1), unit(g)));
            }
        }
        for (label, x) in samples {
            let outer = self.components(&x)?;
            for i in 1..n {
                let inner = self.components(&outer[i])?;
                for j in 1..=n - i {
                    let c = binomial_in::<C>(&ctx, (i + j) as u64, i as u64);
                    let rhs: Vec<C> = outer[i + j].iter().map(|v| v.mul(&c)).collect();
                    if inner[j] != rhs {
                        return Ok(IterativityReport {
                            verdict: false,
                            checked_order: n,
                            first_failure: Some(IterFailure {
                                i,
                                j,
                                generator: label,
                                lhs: format!("{:?}", inner[j]),
                                rhs: format!("{:?}", rhs),
                            }),
                        });
                    }
                }
            }
        }
        Ok(IterativityReport { verdict: true, checked_order: n, first_failure: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, MPoly, Ring};
    use crate::hderiv::phi_t;
    use crate::hdiff::DifAlgebra;

    #[test]
    fn rank_one_with_phi_t() {
        let d = DifAlgebra::<MPoly<Fp>>::new(&(3, 1), 4);
        let omega = Matrix::from_rows(vec![vec![d.parse("1 + d1_t").unwrap()]]).unwrap();
        let c = HigherConnection::new(d.clone(), omega).unwrap();
        let phi = phi_t::<Fp>(&3, 1, 0, 4);
        let cp = c.apply_psi(&phi).unwrap();
        assert!(cp.component(1).get(0, 0).is_one());
        assert!(cp.component(2).get(0, 0).is_zero());
        let triv = HigherConnection::trivial(&d, 2).apply_psi(&phi).unwrap();
        assert!(triv.component(1).is_zero());
        let x = vec![MPoly::parse("t^2", 1, &3).unwrap(), MPoly::one(&(3, 1))];
        let comps = triv.components(&x).unwrap();
        assert_eq!(comps[1][0].to_string(), "2*t");
        assert!(triv.is_iterative().unwrap().verdict);
    }
}
