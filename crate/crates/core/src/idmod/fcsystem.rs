use rand::Rng;

use crate::algebra::{Matrix, Ring};
use crate::random;

use super::{
    check_square, checked_depth, identity, is_frobenius_power, kernel_descent, series_mul, theta_series, IdStructure, IdmodError, Mat,
};

/// Chain of lattices M_0 ⊇ M_1 ⊇ … ⊇ M_L; the columns of B_l span M_l over
/// F^(p^l).
#[derive(Clone, Debug, PartialEq)]
pub struct FcProjSystem {
    pub p: u32,
    pub n: usize,
    pub depth: u32,
    pub b: Vec<Mat>,
}

impl FcProjSystem {
    /// Validates shapes, B_0 = I, invertibility and the chain invariant.
    pub fn new(p: u32, n: usize, depth: u32, b: Vec<Mat>) -> Result<Self, IdmodError> {
        checked_depth(p, depth)?;
        if b.len() != depth as usize + 1 {
            return Err(IdmodError::DimensionMismatch(format!("{} lattices for depth {depth}", b.len())));
        }
        check_square(&b, n)?;
        if b[0] != identity(n, p) {
            return Err(IdmodError::DimensionMismatch("B_0 must be the identity".into()));
        }
        let s = FcProjSystem { p, n, depth, b };
        s.check_invariant()?;
        Ok(s)
    }

    /// Builds without validation; used to exercise the error paths.
    pub fn new_unchecked(p: u32, n: usize, depth: u32, b: Vec<Mat>) -> Self {
        FcProjSystem { p, n, depth, b }
    }

    pub fn trivial(p: u32, n: usize, depth: u32) -> Self {
        FcProjSystem { p, n, depth, b: vec![identity(n, p); depth as usize + 1] }
    }

    /// B_l^{-1} B_{l+1} ∈ GL_n(F^(p^l)) for every l.
    pub fn check_invariant(&self) -> Result<(), IdmodError> {
        for l in 0..self.depth {
            let inv = self.b[l as usize].inverse().map_err(|_| IdmodError::InvariantViolation { level: l })?;
            let g = inv.mul(&self.b[l as usize + 1]);
            if g.det().is_zero() || !is_frobenius_power(&g, l) {
                return Err(IdmodError::InvariantViolation { level: l });
            }
        }
        Ok(())
    }

    /// Θ^(k) = B_l θ^(k)(B_l^{-1}) for k < p^l, computed directly at one level.
    pub fn level_components(&self, l: u32) -> Result<Vec<Mat>, IdmodError> {
        let bl = &self.b[l as usize];
        let q = (self.p as usize).pow(l);
        let th = theta_series(&bl.inverse()?, q - 1);
        Ok(th.iter().map(|tk| bl.mul(tk)).collect())
    }

    /// The ID-structure of the chain.
    ///
    /// Writing B_l = B_{l-1} G^(p^(l-1)), the series S_l(T) = B_l θ(B_l^{-1})
    /// satisfies S_l = B_{l-1} H(T) B_{l-1}^{-1} S_{l-1} where H only has
    /// terms in T^(p^(l-1)) with coefficients (G θ^(k)(G^{-1}))^(p^(l-1)).
    /// This keeps every Hasse series on the small factors G.
    pub fn to_id_structure(&self) -> Result<IdStructure, IdmodError> {
        self.check_invariant()?;
        let p = self.p as usize;
        let n = self.n;
        if self.depth == 0 {
            return IdStructure::new(self.p, n, 0, vec![]);
        }
        let len = p.pow(self.depth);
        let mut s = series_mul(&[self.b[1].clone()], &theta_series(&self.b[1].inverse()?, len - 1), len);
        for l in 2..=self.depth {
            let q = p.pow(l - 1);
            let prev = &self.b[l as usize - 1];
            let prev_inv = prev.inverse()?;
            let g = prev_inv.mul(&self.b[l as usize]).map(|x| x.pth_root_iter(l - 1).expect("checked invariant"));
            let gh = series_mul(std::slice::from_ref(&g), &theta_series(&g.inverse()?, (len - 1) / q), (len - 1) / q + 1);
            let mut h = vec![Matrix::zero(n, n, &self.p); len];
            for (k, m) in gh.iter().enumerate() {
                h[k * q] = prev.mul(&m.map(|x| x.inflate(q))).mul(&prev_inv);
            }
            s = series_mul(&h, &s, len);
        }
        let c = (0..self.depth).map(|l| s[p.pow(l)].clone()).collect();
        IdStructure::new(self.p, n, self.depth, c)
    }

    /// Same lattices: B_l^{-1} B'_l ∈ GL_n(F^(p^l)) at every level.
    pub fn same_lattices(&self, other: &FcProjSystem) -> Result<bool, IdmodError> {
        if self.p != other.p || self.n != other.n || self.depth != other.depth {
            return Ok(false);
        }
        for (l, (b, b2)) in self.b.iter().zip(&other.b).enumerate() {
            let g = b.inverse()?.mul(b2);
            if g.det().is_zero() || !is_frobenius_power(&g, l as u32) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Structure, then descent back to lattices, then comparison.
    pub fn roundtrip(&self) -> Result<bool, IdmodError> {
        let s = self.to_id_structure()?;
        let back = kernel_descent(&s, self.depth)?;
        self.same_lattices(&back)
    }

    /// B_{l+1} = B_l G_l^(p^l) with G_l a random polynomial matrix of
    /// degree ≤ deg and nonzero determinant.
    pub fn random(rng: &mut impl Rng, p: u32, n: usize, depth: u32, deg: usize) -> Self {
        let mut b = vec![identity(n, p)];
        for l in 0..depth {
            let g = loop {
                let rows = (0..n).map(|_| (0..n).map(|_| random::ratfunc_poly(rng, p, deg)).collect()).collect();
                let g = Matrix::from_rows(rows).expect("square");
                if !g.det().is_zero() {
                    break g;
                }
            };
            let q = (p as usize).pow(l);
            let next = b[l as usize].mul(&g.map(|x| x.inflate(q)));
            b.push(next);
        }
        FcProjSystem { p, n, depth, b }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RatFunc;

    fn rf(s: &str, p: u32) -> RatFunc {
        RatFunc::parse(s, p).unwrap()
    }

    fn mat(rows: &[&[&str]], p: u32) -> Mat {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| rf(s, p)).collect()).collect()).unwrap()
    }

    #[test]
    fn unipotent_chain_gives_nilpotent_structure() {
        let p = 2;
        let b1 = mat(&[&["1", "t"], &["0", "1"]], p);
        let s = FcProjSystem::new(p, 2, 2, vec![identity(2, p), b1.clone(), b1]).unwrap();
        let id = s.to_id_structure().unwrap();
        assert_eq!(id.c[0], mat(&[&["0", "1"], &["0", "0"]], p));
        assert!(id.c[1].is_zero());
        assert!(id.check().verdict);
    }

    #[test]
    fn rank_one_chain() {
        let p = 2;
        let b1 = mat(&[&["1/(1+t)"]], p);
        let s = FcProjSystem::new(p, 1, 1, vec![identity(1, p), b1]).unwrap();
        assert_eq!(s.to_id_structure().unwrap().c[0], mat(&[&["1/(1+t)"]], p));
    }

    #[test]
    fn trivial_chain() {
        let s = FcProjSystem::trivial(3, 2, 2);
        assert_eq!(s.to_id_structure().unwrap(), IdStructure::trivial(3, 2, 2));
        assert!(s.roundtrip().unwrap());
    }

    #[test]
    fn corrupted_chain_is_rejected() {
        let p = 2;
        let b = vec![identity(1, p), mat(&[&["t"]], p), mat(&[&["t^2"]], p)];
        assert!(matches!(FcProjSystem::new(p, 1, 2, b.clone()), Err(IdmodError::InvariantViolation { level: 1 })));
        let s = FcProjSystem::new_unchecked(p, 1, 2, b);
        assert!(matches!(s.roundtrip(), Err(IdmodError::InvariantViolation { level: 1 })));
    }

    #[test]
    fn components_do_not_depend_on_level() {
        let mut rng = random::rng(11);
        for p in [2, 3] {
            let s = FcProjSystem::random(&mut rng, p, 2, 2, 3);
            let full = s.to_id_structure().unwrap().full();
            for l in 0..=2 {
                let direct = s.level_components(l).unwrap();
                assert_eq!(direct[..], full[..direct.len()], "p={p} l={l}");
            }
        }
    }

    #[test]
    fn random_chains_satisfy_invariant() {
        let mut rng = random::rng(7);
        for p in [2, 3] {
            let s = FcProjSystem::random(&mut rng, p, 2, 2, 2);
            s.check_invariant().unwrap();
            assert!(s.to_id_structure().unwrap().check().verdict);
        }
    }
}
