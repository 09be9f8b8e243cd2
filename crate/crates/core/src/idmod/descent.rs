use crate::algebra::{Matrix, RatFunc, Ring};

use super::{identity, is_frobenius_power, series_mul, theta_series, FcProjSystem, IdStructure, IdmodError, Mat};

/// Lattices B_0..B_l of the kernels M_l = ⋂_{0<j<p^l} Ker Θ^(j).
///
/// M_1 is the kernel of the F^p-linear map Θ^(1); writing x_j = Σ_a u_{a,j}^p t^a
/// turns it into an F-linear system of size np in the roots u.  The structure
/// induced on M_1 is read off in the new basis, its p-th root taken, and the
/// procedure repeats one level down.
pub fn kernel_descent(s: &IdStructure, l: u32) -> Result<FcProjSystem, IdmodError> {
    if l > s.depth {
        return Err(IdmodError::LevelTooLarge { level: l, max: s.depth });
    }
    let q = (s.p as usize).pow(l);
    let full: Vec<Mat> = s.full().into_iter().take(q).collect();
    let b = descend(s.p, s.n, full, l, 0)?;
    Ok(FcProjSystem::new_unchecked(s.p, s.n, l, b))
}

/// `a` holds Â_0..Â_{p^l - 1}; `offset` only labels errors.
fn descend(p: u32, n: usize, a: Vec<Mat>, l: u32, offset: u32) -> Result<Vec<Mat>, IdmodError> {
    if l == 0 {
        return Ok(vec![identity(n, p)]);
    }
    let level = offset + 1;
    let b1 = kernel_basis(p, n, &a[1], level)?;
    let b1_inv = b1.inverse()?;
    let th = theta_series(&b1, a.len() - 1);
    let twisted = series_mul(&a, &th, a.len());
    let mut next = Vec::with_capacity(a.len() / p as usize);
    for (k, ak) in twisted.iter().enumerate() {
        let ak = b1_inv.mul(ak);
        if k % p as usize != 0 {
            if !ak.is_zero() {
                return Err(IdmodError::NotDescendable { level, reason: format!("component {k} does not vanish on the kernel") });
            }
        } else {
            if !is_frobenius_power(&ak, 1) {
                return Err(IdmodError::NotDescendable { level, reason: format!("component {k} is not a p-th power") });
            }
            next.push(ak.map(|x| x.pth_root().expect("checked above")));
        }
    }
    let lower = descend(p, n, next, l - 1, level)?;
    let mut out = vec![identity(n, p)];
    for bm in lower {
        out.push(b1.mul(&bm.map(|x| x.inflate(p as usize))));
    }
    Ok(out)
}

/// Basis of Ker(x ↦ θ^(1)(x) + Â_1 x) over F^p, as columns.
fn kernel_basis(p: u32, n: usize, a1: &Mat, level: u32) -> Result<Mat, IdmodError> {
    let pu = p as usize;
    let idx = |a: usize, j: usize| a * n + j;
    let mut m: Mat = Matrix::zero(n * pu, n * pu, &p);
    for i in 0..n {
        for j in 0..n {
            let entry = a1.get(i, j);
            for a in 0..pu {
                let roots = entry.mul(&RatFunc::t(p).pow(a as u64)).frobenius_roots(1);
                for (b, r) in roots.into_iter().enumerate() {
                    let cur = m.get(idx(b, i), idx(a, j)).add(&r);
                    m.set(idx(b, i), idx(a, j), cur);
                }
            }
        }
        // θ^(1)(u^p t^a) = a u^p t^(a-1)
        for a in 1..pu {
            let cur = m.get(idx(a - 1, i), idx(a, i)).add(&RatFunc::from_int(&p, a as i64));
            m.set(idx(a - 1, i), idx(a, i), cur);
        }
    }
    let kernel = m.kernel(&p);
    if kernel.len() != n {
        return Err(IdmodError::RankDefect { level, rank: kernel.len(), expected: n });
    }
    let cols: Vec<Vec<RatFunc>> = kernel
        .iter()
        .map(|u| {
            (0..n)
                .map(|j| (0..pu).fold(RatFunc::zero(&p), |acc, a| acc.add(&u[idx(a, j)].inflate(pu).mul(&RatFunc::t(p).pow(a as u64)))))
                .collect()
        })
        .collect();
    let b = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    if b.det().is_zero() {
        return Err(IdmodError::RankDefect { level, rank: b.rank(), expected: n });
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str, p: u32) -> RatFunc {
        RatFunc::parse(s, p).unwrap()
    }

    fn mat(rows: &[&[&str]], p: u32) -> Mat {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| rf(s, p)).collect()).collect()).unwrap()
    }

    #[test]
    fn trivial_structure_gives_identity_lattices() {
        let s = IdStructure::trivial(3, 2, 2);
        let f = kernel_descent(&s, 2).unwrap();
        assert!(f.same_lattices(&FcProjSystem::trivial(3, 2, 2)).unwrap());
    }

    #[test]
    fn unipotent_example() {
        let p = 2;
        let c1 = mat(&[&["0", "1"], &["0", "0"]], p);
        let s = IdStructure::new(p, 2, 1, vec![c1]).unwrap();
        let f = kernel_descent(&s, 1).unwrap();
        let expected = FcProjSystem::new(p, 2, 1, vec![identity(2, p), mat(&[&["1", "t+t^2"], &["0", "1"]], p)]).unwrap();
        assert!(f.same_lattices(&expected).unwrap());
    }

    #[test]
    fn rank_one_example() {
        let p = 2;
        let s = IdStructure::new(p, 1, 1, vec![mat(&[&["1/(1+t)"]], p)]).unwrap();
        let f = kernel_descent(&s, 1).unwrap();
        let expected = FcProjSystem::new(p, 1, 1, vec![identity(1, p), mat(&[&["1/(1+t)"]], p)]).unwrap();
        assert!(f.same_lattices(&expected).unwrap());
    }

    #[test]
    fn non_iterative_structure_fails() {
        // Θ^(1) = θ + 1 on F has no nonzero kernel: x' = x forces x = 0
        let p = 2;
        let s = IdStructure::new(p, 1, 1, vec![mat(&[&["1"]], p)]).unwrap();
        assert!(matches!(kernel_descent(&s, 1), Err(IdmodError::RankDefect { level: 1, rank: 0, expected: 1 })));
    }

    #[test]
    fn descent_inverts_the_forward_functor() {
        let p = 3;
        let b1 = mat(&[&["1+t", "t^2"], &["0", "1"]], p);
        let b2 = b1.mul(&mat(&[&["1", "t^3"], &["t^6", "2"]], p));
        let sys = FcProjSystem::new(p, 2, 2, vec![identity(2, p), b1, b2]).unwrap();
        assert!(sys.roundtrip().unwrap());
    }
}
