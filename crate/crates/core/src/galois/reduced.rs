//! Reducedness of K[G] against separability of E/F.

use crate::algebra::{Fp, RatFunc, Ring};
use crate::idmod::frobenius_compatibility;

use super::hopf::HopfAlgebra;
use super::linalg;
use super::ring::ThetaRing;
use super::sigma::SigmaPoly;
use super::torsor::{r2_mul, R2Elem};

#[derive(Clone, Debug, PartialEq)]
pub struct Separability {
    pub group_reduced: bool,
    /// E ⊗_F E reduced; None when no nilpotent was found in the K-form
    /// searched, which does not exclude one over F.
    pub tensor_square_reduced: Option<bool>,
    pub witness: Option<String>,
}

impl Separability {
    pub fn separable(&self) -> Option<bool> {
        self.tensor_square_reduced
    }

    /// Reduced group scheme iff separable extension, where decided.
    pub fn consistent(&self) -> bool {
        self.tensor_square_reduced.is_none_or(|s| s == self.group_reduced)
    }
}

/// x ≠ 0 in the F_p-span of r^a ⊗ r^b with x^p = 0.  Frobenius is F_p-linear
/// there, so this is a kernel computation.
pub fn tensor_square_nilpotent(ring: &ThetaRing) -> Option<R2Elem> {
    let d = ring.dim();
    let ctx = ring.ctx();
    let basis: Vec<R2Elem> = (0..d * d)
        .map(|ab| {
            let mut x = vec![SigmaPoly::zero(&ctx); d * d];
            x[ab] = SigmaPoly::one(&ctx);
            x
        })
        .collect();
    let images: Vec<Vec<SigmaPoly>> = basis.iter().map(|x| (1..ring.p()).fold(x.clone(), |acc, _| r2_mul(ring, &acc, x))).collect();
    let kernel = linalg::fp_relations(&images, ring.p());
    kernel.first().map(|v| {
        v.iter().zip(&basis).fold(vec![SigmaPoly::zero(&ctx); d * d], |acc, (c, x)| {
            acc.iter().zip(x).map(|(a, b)| a.add(&b.mul(&SigmaPoly::from_fp(*c, ctx.1)))).collect()
        })
    })
}

pub fn reduced_and_separable(ring: &ThetaRing, group: &HopfAlgebra) -> Separability {
    let group_reduced = group.is_reduced();
    if ring.dim() == 1 {
        return Separability { group_reduced, tensor_square_reduced: Some(true), witness: None };
    }
    match tensor_square_nilpotent(ring) {
        Some(x) => {
            let d = ring.dim();
            let parts: Vec<String> = x
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(ab, c)| format!("{c}*[{}]⊗[{}]", ring.render(&ring.basis(ab / d)), ring.render(&ring.basis(ab % d))))
                .collect();
            Separability { group_reduced, tensor_square_reduced: Some(false), witness: Some(parts.join(" + ")) }
        }
        None => Separability { group_reduced, tensor_square_reduced: None, witness: None },
    }
}

/// Ker θ^(1) on polynomials of degree ≤ `degree` is spanned by the t^i with
/// p | i, and agrees element by element with the p-th power test.
pub fn kernel_theta1_is_pth_powers(p: u32, degree: usize) -> bool {
    let t = RatFunc::t(p);
    let cols: Vec<Vec<Fp>> = (0..=degree)
        .map(|i| {
            let d = t.pow(i as u64).hasse(1);
            (0..=degree).map(|j| if d.is_zero() { Fp::new(0, p) } else { d.num().coeff(j) }).collect()
        })
        .collect();
    let kernel = linalg::kernel_of_columns(&cols, p);
    let expected: Vec<Vec<Fp>> = (0..=degree).filter(|i| i % p as usize == 0).map(|i| linalg::unit(degree + 1, i, p)).collect();
    let same = linalg::rank(&kernel) == expected.len() && expected.iter().all(|v| linalg::in_span(&kernel, v));
    let agree = (0..=degree).all(|i| {
        let f = t.pow(i as u64).add(&RatFunc::one(&p));
        let fc = frobenius_compatibility(&f, 1).expect("level 1");
        fc.agree() && fc.kernel == (i % p as usize == 0)
    });
    same && agree
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inseparable_extension_has_nonreduced_square() {
        let r = ThetaRing::mupmup(2, &[vec![1, 1]], 2).unwrap();
        let s = reduced_and_separable(&r, &HopfAlgebra::mu(2, 2));
        assert_eq!(s.tensor_square_reduced, Some(false));
        assert!(!s.group_reduced);
        assert!(s.consistent());
        assert!(s.witness.is_some());
    }

    #[test]
    fn trivial_extension_is_separable() {
        let r = ThetaRing::trivial(3, 1).unwrap();
        let s = reduced_and_separable(&r, &HopfAlgebra::mu(3, 1));
        assert_eq!(s.separable(), Some(true));
        assert!(s.group_reduced && s.consistent());
    }

    #[test]
    fn frobenius_kernel_cross_check() {
        for p in [2, 3, 5] {
            assert!(kernel_theta1_is_pth_powers(p, 12));
        }
    }
}
