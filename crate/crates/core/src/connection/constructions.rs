use crate::algebra::{Matrix, Ring};
use crate::cga::{CgaElement, Coefficient};
use crate::hderiv::{phi_generator, HigherDerivation};
use crate::hdiff::FreeDomain;

use super::{scale_weights, ConnectionError, DifVec, HigherConnection};

/// Inverse of a matrix over Dif whose degree-0 part is the identity.
fn invert_unipotent<C: Ring>(m: &Matrix<CgaElement<C>>, order: usize) -> Matrix<CgaElement<C>> {
    let ctx = m.get(0, 0).ctx();
    let id = Matrix::identity(m.rows(), &ctx);
    let neg_u = id.sub(m);
    let mut acc = id.clone();
    let mut pw = id;
    for _ in 0..order {
        pw = pw.mul(&neg_u);
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw);
    }
    acc
}

impl<C: FreeDomain> HigherConnection<C> {
    /// Columns V_j = _Dif∇^{-1}(1 ⊗ b_j), by back-substitution in the weight:
    /// v_0 = b_j and v_w = -Σ_{i≥1} _Dif∇^(i)(v_{w-i}).
    pub fn inverse_on_basis(&self) -> Result<Matrix<CgaElement<C>>, ConnectionError> {
        let n = self.rank();
        let ctx = self.dif_ctx();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let v0: DifVec<C> = (0..n).map(|i| if i == j { CgaElement::one(&ctx) } else { CgaElement::zero(&ctx) }).collect();
            let mut parts = vec![v0];
            let mut images = Vec::new();
            for w in 1..=self.order() {
                images.push(self.dif_nabla(&parts[w - 1])?);
                let mut vw: DifVec<C> = vec![CgaElement::zero(&ctx); n];
                for img in &images {
                    for (a, x) in vw.iter_mut().zip(img) {
                        *a = a.sub(&x.homogeneous(w));
                    }
                }
                parts.push(vw);
            }
            let col: DifVec<C> = (0..n).map(|i| parts.iter().fold(CgaElement::zero(&ctx), |acc, p| acc.add(&p[i]))).collect();
            cols.push(col);
        }
        Ok(Matrix::from_fn(n, n, |i, j| cols[j][i].clone()))
    }

    /// d_Dif applied entrywise to the back-substituted inverse; equals Ω^{-1}.
    fn inverse_matrix(&self) -> Result<Matrix<CgaElement<C>>, ConnectionError> {
        let d = self.dif.d_dif();
        Ok(self.inverse_on_basis()?.try_map(|x| d.apply(x))?)
    }

    /// The dual connection on M*, with Ω* = d_Dif(V)^T.
    pub fn dual(&self) -> Result<HigherConnection<C>, ConnectionError> {
        HigherConnection::new(self.dif.clone(), self.inverse_matrix()?.transpose())
    }

    /// Cross-checks of the dual: against (Ω^{-1})^T from a Neumann series and,
    /// for iterative ∇, against the shortcut _Dif∇^{-1} = (-1)._Dif∇ on 1 ⊗ M.
    pub fn dual_cross_check(&self) -> Result<bool, ConnectionError> {
        let dual = self.dual()?;
        let neumann = invert_unipotent(self.omega(), self.order()).transpose();
        if *dual.omega() != neumann {
            return Ok(false);
        }
        if self.is_iterative().verdict {
            let minus_one = C::from_int(self.dif.ctx(), -1);
            let shortcut = self.omega().map(|x| scale_weights(x, &minus_one));
            if self.inverse_on_basis()? != shortcut {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// ∇ on M_1 ⊗ M_2 with basis b_i ⊗ b'_k at index i*n2 + k.
    pub fn tensor(&self, other: &Self) -> Result<HigherConnection<C>, ConnectionError> {
        self.same_base(other)?;
        HigherConnection::new(self.dif.clone(), self.omega().kron(other.omega()))
    }

    /// ∇_H on Hom(M_1, M_2) = Hom(self, target), basis E_lk : b_k ↦ b'_l at
    /// index l*n1 + k, with Ω_H[(l,k),(l',j)] = Ω2[l,l'] · (Ω1^{-1})[j,k].
    pub fn hom(&self, target: &Self) -> Result<HigherConnection<C>, ConnectionError> {
        self.same_base(target)?;
        let w = self.inverse_matrix()?;
        let (n1, n2) = (self.rank(), target.rank());
        let omega = Matrix::from_fn(n1 * n2, n1 * n2, |r, c| {
            let (l, k) = (r / n1, r % n1);
            let (lp, j) = (c / n1, c % n1);
            target.omega().get(l, lp).mul(w.get(j, k))
        });
        HigherConnection::new(self.dif.clone(), omega)
    }

    /// Whether F: M_1 → M_2 (an n2×n1 matrix over R) is horizontal:
    /// Ω2 · d_R(F) = F · Ω1.
    pub fn is_morphism(&self, target: &Self, f: &Matrix<C>) -> Result<bool, ConnectionError> {
        self.same_base(target)?;
        if f.rows() != target.rank() || f.cols() != self.rank() {
            return Err(ConnectionError::DescriptorMismatch(format!(
                "{}x{} matrix between ranks {} and {}",
                f.rows(),
                f.cols(),
                self.rank(),
                target.rank()
            )));
        }
        let df = f.try_map(|x| self.dif.d_r(x))?;
        let fs = f.map(|x| self.dif.scalar(x.clone()));
        Ok(target.omega().mul(&df) == fs.mul(self.omega()))
    }

    /// Finite-family integrability evidence: Ω_{ψ1ψ2} = Ω_{ψ1} · ψ1[[T]](Ω_{ψ2})
    /// for ψ in {a.φ_{t_j} : a ∈ F_p^×} and all ordered pairs.
    pub fn integrability_evidence(&self) -> Result<IntegrabilityReport, ConnectionError> {
        let ctx = self.dif.ctx().clone();
        let p = C::one(&ctx).characteristic();
        let scalars: Vec<i64> = if p == 0 { vec![1, -1, 2] } else { (1..p as i64).collect() };
        let mut family: Vec<(String, HigherDerivation<C>)> = Vec::new();
        for j in 0..C::generator_count(&ctx) {
            let phi = phi_generator::<C>(&ctx, j, self.order());
            for &a in &scalars {
                let name = format!("{a}.phi_{}", C::generators(&ctx)[j]);
                family.push((name, phi.scale_action(&C::from_int(&ctx, a))));
            }
        }
        let mut checked = 0;
        for (n1, p1) in &family {
            let c1 = self.apply_psi(p1)?;
            let lift = p1.series_map();
            for (n2, p2) in &family {
                let c2 = self.apply_psi(p2)?;
                let prod = self.apply_psi(&p1.multiply(p2)?)?;
                let rhs = c1.omega().mul(&c2.omega().try_map(|x| lift.apply(x))?);
                checked += 1;
                if *prod.omega() != rhs {
                    return Ok(IntegrabilityReport { verdict: false, pairs_checked: checked, failure: Some(format!("{n1} * {n2}")) });
                }
            }
        }
        Ok(IntegrabilityReport { verdict: true, pairs_checked: checked, failure: None })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrabilityReport {
    pub verdict: bool,
    pub pairs_checked: usize,
    pub failure: Option<String>,
}

impl IntegrabilityReport {
    pub const LABEL: &'static str = "finite-family evidence, not a proof";
}

impl std::fmt::Display for IntegrabilityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.failure {
            None => write!(f, "{} pairs agree ({})", self.pairs_checked, Self::LABEL),
            Some(x) => write!(f, "fails on {x} ({})", Self::LABEL),
        }
    }
}

/// ε: M ⊗ M* → R, b_i ⊗ b_j* ↦ δ_ij, as a 1×n² matrix.
pub fn evaluation<C: Coefficient>(n: usize, ctx: &C::Ctx) -> Matrix<C> {
    Matrix::from_fn(1, n * n, |_, c| if c / n == c % n { C::one(ctx) } else { C::zero(ctx) })
}

/// δ: R → M* ⊗ M, 1 ↦ Σ b_i* ⊗ b_i, as an n²×1 matrix.
pub fn coevaluation<C: Coefficient>(n: usize, ctx: &C::Ctx) -> Matrix<C> {
    Matrix::from_fn(n * n, 1, |r, _| if r / n == r % n { C::one(ctx) } else { C::zero(ctx) })
}

/// ι: M1* ⊗ M2 → Hom(M1, M2), b_k* ⊗ b'_l ↦ E_lk.
pub fn iota<C: Coefficient>(n1: usize, n2: usize, ctx: &C::Ctx) -> Matrix<C> {
    Matrix::from_fn(n1 * n2, n1 * n2, |r, c| {
        let (l, k) = (r / n1, r % n1);
        let (k2, l2) = (c / n2, c % n2);
        if k == k2 && l == l2 {
            C::one(ctx)
        } else {
            C::zero(ctx)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, MPoly};
    use crate::hdiff::DifAlgebra;

    fn sample(p: u32, n: usize) -> HigherConnection<MPoly<Fp>> {
        let d = DifAlgebra::<MPoly<Fp>>::new(&(p, 1), n);
        let omega = Matrix::from_rows(vec![
            vec![d.parse("1 + t*d1_t").unwrap(), d.parse("d2_t + d1_t^2").unwrap()],
            vec![d.parse("d1_t").unwrap(), d.parse("1 + 2*d3_t").unwrap()],
        ])
        .unwrap();
        HigherConnection::new(d, omega).unwrap()
    }

    #[test]
    fn rank_one_dual_negates_first_order() {
        let d = DifAlgebra::<MPoly<Fp>>::new(&(5, 1), 1);
        let omega = Matrix::from_rows(vec![vec![d.parse("1 + t*d1_t").unwrap()]]).unwrap();
        let c = HigherConnection::new(d.clone(), omega).unwrap();
        assert_eq!(c.dual().unwrap().omega().get(0, 0).render(), "1 + (4*t) * d1_t");
        assert!(c.dual_cross_check().unwrap());
        let triv = HigherConnection::trivial(&d, 3);
        assert_eq!(triv.dual().unwrap(), triv);
        assert_eq!(triv.tensor(&triv).unwrap(), HigherConnection::trivial(&d, 9));
    }

    #[test]
    fn evaluation_coevaluation_iota_are_morphisms() {
        let c = sample(3, 4);
        let ctx = (3, 1);
        let dual = c.dual().unwrap();
        assert!(c.dual_cross_check().unwrap());
        let one = HigherConnection::trivial(c.dif(), 1);
        assert!(c.tensor(&dual).unwrap().is_morphism(&one, &evaluation(2, &ctx)).unwrap());
        assert!(one.is_morphism(&dual.tensor(&c).unwrap(), &coevaluation(2, &ctx)).unwrap());
        let d2 = sample(3, 4).dual().unwrap();
        let src = dual.tensor(&d2).unwrap();
        assert!(src.is_morphism(&c.hom(&d2).unwrap(), &iota(2, 2, &ctx)).unwrap());
    }

    #[test]
    fn multiplication_by_t_is_not_horizontal() {
        let d = DifAlgebra::<MPoly<Fp>>::new(&(3, 1), 3);
        let triv = HigherConnection::trivial(&d, 1);
        let t = Matrix::from_rows(vec![vec![MPoly::parse("t", 1, &3).unwrap()]]).unwrap();
        assert!(!triv.is_morphism(&triv, &t).unwrap());
        let id = Matrix::identity(2, &(3, 1));
        let c = sample(3, 3);
        assert!(c.is_morphism(&c, &id).unwrap());
    }

    #[test]
    fn finite_family_on_trivial() {
        let d = DifAlgebra::<MPoly<Fp>>::new(&(3, 2), 3);
        let rep = HigherConnection::trivial(&d, 2).integrability_evidence().unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.pairs_checked, 16);
        assert!(rep.to_string().contains("not a proof"));
        assert!(!sample(3, 3).integrability_evidence().unwrap().verdict);
    }
}
