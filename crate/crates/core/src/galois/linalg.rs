//! Linear algebra over F_p used by the finite constructions.

use std::collections::BTreeMap;

use crate::algebra::{Fp, Matrix, Poly, RatFunc, Ring};

use super::sigma::SigmaPoly;

pub type FpVec = Vec<Fp>;

pub fn zeros(n: usize, p: u32) -> FpVec {
    vec![Fp::new(0, p); n]
}

pub fn unit(n: usize, i: usize, p: u32) -> FpVec {
    let mut v = zeros(n, p);
    v[i] = Fp::new(1, p);
    v
}

pub fn is_zero(v: &[Fp]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn axpy(acc: &mut [Fp], c: Fp, v: &[Fp]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a = a.add(&c.mul(x));
    }
}

/// Reduced row echelon basis of the span.
pub fn basis(rows: &[FpVec]) -> Vec<FpVec> {
    if rows.is_empty() {
        return vec![];
    }
    let mut m = Matrix::from_rows(rows.to_vec()).expect("rectangular");
    let r = m.rref().len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

pub fn rank(rows: &[FpVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows.to_vec()).expect("rectangular").rank()
}

pub fn in_span(rows: &[FpVec], v: &[Fp]) -> bool {
    let mut all = rows.to_vec();
    all.push(v.to_vec());
    rank(&all) == rank(rows)
}

/// Solutions x of Σ_j x_j cols[j] = 0.
pub fn kernel_of_columns(cols: &[FpVec], p: u32) -> Vec<FpVec> {
    let Some(len) = cols.first().map(Vec::len) else {
        return vec![];
    };
    if len == 0 {
        return (0..cols.len()).map(|j| unit(cols.len(), j, p)).collect();
    }
    let m = Matrix::from_fn(len, cols.len(), |i, j| cols[j][i]);
    m.kernel(&p)
}

/// Linear functionals vanishing on the span of `rows`, inside F_p^n.
pub fn annihilator(rows: &[FpVec], n: usize, p: u32) -> Vec<FpVec> {
    if rows.is_empty() {
        return (0..n).map(|i| unit(n, i, p)).collect();
    }
    Matrix::from_rows(rows.to_vec()).expect("rectangular").kernel(&p)
}

/// Every element of F_p^n, in lexicographic order of coordinates.
pub fn all_vectors(n: usize, p: u32) -> impl Iterator<Item = FpVec> {
    let total = (p as usize).pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = idx % p as usize;
                idx /= p as usize;
                Fp::new(d as i64, p)
            })
            .collect()
    })
}

/// F_p-linear relations among vectors with coordinates in F_p(t)[σ^±].
///
/// Every coordinate is expanded over σ-monomials, denominators are cleared
/// with the lcm, and the t-coefficients give the equations.
pub fn fp_relations(cols: &[Vec<SigmaPoly>], p: u32) -> Vec<FpVec> {
    let mut slots: BTreeMap<(usize, Vec<i32>), Vec<RatFunc>> = BTreeMap::new();
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            for (m, c) in x.terms() {
                slots.entry((i, m.clone())).or_insert_with(|| vec![RatFunc::zero(&p); cols.len()])[j] = c.clone();
            }
        }
    }
    let mut rows: Vec<FpVec> = vec![];
    for vals in slots.values() {
        let mut lcm = Poly::one(&p);
        for v in vals.iter().filter(|v| !v.is_zero()) {
            let g = lcm.gcd(v.den());
            lcm = lcm.mul(&v.den().divrem(&g).0);
        }
        let nums: Vec<Poly<Fp>> = vals.iter().map(|v| v.num().mul(&lcm.divrem(v.den()).0)).collect();
        let top = nums.iter().filter_map(|q| q.degree()).max();
        if let Some(top) = top {
            for d in 0..=top {
                rows.push(nums.iter().map(|q| q.coeff(d)).collect());
            }
        }
    }
    if rows.is_empty() {
        return (0..cols.len()).map(|j| unit(cols.len(), j, p)).collect();
    }
    Matrix::from_rows(rows).expect("rectangular").kernel(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64], p: u32) -> FpVec {
        xs.iter().map(|&x| Fp::new(x, p)).collect()
    }

    #[test]
    fn spans_and_annihilators() {
        let p = 3;
        let rows = vec![v(&[1, 2, 0], p), v(&[2, 1, 0], p)];
        assert_eq!(rank(&rows), 1);
        assert_eq!(basis(&rows).len(), 1);
        let ann = annihilator(&rows, 3, p);
        assert_eq!(ann.len(), 2);
        assert!(in_span(&rows, &v(&[1, 2, 0], p)));
        assert!(!in_span(&rows, &v(&[0, 0, 1], p)));
        assert_eq!(all_vectors(2, 3).count(), 9);
    }

    #[test]
    fn relations_over_rational_functions() {
        let p = 2;
        let a = SigmaPoly::from_ratfunc(RatFunc::parse("1/(1+t)", p).unwrap(), 1);
        let b = SigmaPoly::from_ratfunc(RatFunc::parse("t/(1+t)", p).unwrap(), 1);
        let one = SigmaPoly::one(&(p, 1));
        // a + b = 1
        let rel = fp_relations(&[vec![a], vec![b], vec![one]], p);
        assert_eq!(rel, vec![v(&[1, 1, 1], p)]);
    }
}
