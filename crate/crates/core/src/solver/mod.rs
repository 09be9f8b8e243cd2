//! Power-series fundamental solutions of θ(Y) = A Y at t = 0, residual
//! checks, and constants of truncated series spaces.

mod series;

pub use series::{render_series, series_hasse, series_mul, Series, SeriesMatrix};

use thiserror::Error;

use crate::algebra::{binomial_mod_p, AlgebraError, Fp, Matrix, RatFunc, Ring};
use crate::galois::linalg;
use crate::idmod::{IdmodError, IterableEquation, Mat};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Idmod(#[from] IdmodError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("p^L = {bound} does not exceed N = {order}")]
    DepthTooSmall { order: usize, bound: usize },
    #[error("A_{order} has a pole at t = 0")]
    PoleAtOrigin { order: usize },
    #[error("inconsistent equation: θ^({order})(Y) = A_{order} Y fails at t^{degree}")]
    Inconsistent { order: usize, degree: usize },
}

/// Y with Y(0) = I and θ^(k)(Y) = A_k Y modulo t^(N-k+1).  Coefficient Y_m
/// comes from the equation for the lowest nonzero base-p digit of m; all
/// other equations are then checked.
pub fn solve_fundamental(eq: &IterableEquation, order: usize) -> Result<SeriesMatrix, SolverError> {
    let (p, n) = (eq.p, eq.n);
    let bound = eq.bound();
    if bound <= order {
        return Err(SolverError::DepthTooSmall { order, bound });
    }
    let a: Vec<SeriesMatrix> =
        eq.a.iter()
            .enumerate()
            .map(|(l, m)| {
                SeriesMatrix::from_ratfunc_matrix(m, order).map_err(|_| SolverError::PoleAtOrigin { order: (p as usize).pow(l as u32) })
            })
            .collect::<Result<_, _>>()?;
    let mut y: Vec<Matrix<Fp>> = vec![Matrix::identity(n, &p)];
    for m in 1..=order {
        let l = lowest_digit(m, p);
        let q = (p as usize).pow(l);
        let c = binomial_mod_p(m as u64, q as u64, p).try_inverse().expect("lowest digit is nonzero");
        let rhs = (0..=m - q).fold(Matrix::zero(n, n, &p), |acc, i| acc.add(&a[l as usize].coeff(i).mul(&y[m - q - i])));
        y.push(rhs.scale(&c));
    }
    let y = SeriesMatrix::from_coeffs(p, y)?;
    match verify_solution(&y, eq, order).first_failure() {
        Some((k, degree)) => Err(SolverError::Inconsistent { order: k, degree }),
        None => Ok(y),
    }
}

fn lowest_digit(mut m: usize, p: u32) -> u32 {
    let mut l = 0;
    while m.is_multiple_of(p as usize) {
        m /= p as usize;
        l += 1;
    }
    l
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionReport {
    pub order: usize,
    pub shape_ok: bool,
    pub invertible: bool,
    /// Orders k checked, 1 ≤ k ≤ min(N, p^L - 1).
    pub checked: usize,
    /// (k, lowest degree of the residual) for each failing k.
    pub failures: Vec<(usize, usize)>,
}

impl SolutionReport {
    pub fn verdict(&self) -> bool {
        self.shape_ok && self.invertible && self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<(usize, usize)> {
        self.failures.first().copied()
    }

    pub fn max_failing_order(&self) -> Option<usize> {
        self.failures.last().map(|f| f.0)
    }
}

/// Exact residuals of θ^(k)(Y) - A_k Y modulo t^(N-k+1), for every k.
pub fn verify_solution(y: &SeriesMatrix, eq: &IterableEquation, order: usize) -> SolutionReport {
    let order = order.min(y.order());
    let shape_ok = y.n() == eq.n && y.p() == eq.p;
    let mut report = SolutionReport { order, shape_ok, invertible: false, checked: 0, failures: vec![] };
    if !shape_ok {
        return report;
    }
    report.invertible = y.coeff(0).inverse().is_ok();
    let y = y.truncate(order);
    let a = eq.prefix(order + 1);
    for (k, ak) in a.iter().enumerate().skip(1) {
        report.checked += 1;
        let len = order - k;
        let lhs = y.theta(k).expect("k ≤ order");
        let Ok(ak) = SeriesMatrix::from_ratfunc_matrix(ak, len) else {
            report.failures.push((k, 0));
            continue;
        };
        let rhs = ak.mul(&y.truncate(len));
        if let Some(d) = (0..=len).find(|&d| lhs.coeff(d) != rhs.coeff(d)) {
            report.failures.push((k, d));
        }
    }
    report
}

/// Joint kernel of θ^(k), 1 ≤ k ≤ kmax, on the span of `basis` (series of
/// equal length).
pub fn constants(basis: &[Series], kmax: usize) -> Vec<Series> {
    let Some(p) = basis.iter().flatten().next().map(|c| c.modulus()) else {
        return basis.to_vec();
    };
    let len = basis.iter().map(Vec::len).max().unwrap_or(0);
    let cols: Vec<Vec<Fp>> = basis.iter().map(|v| (1..=kmax).flat_map(|k| series_hasse(v, k)).collect()).collect();
    let kernel = if cols.iter().all(Vec::is_empty) {
        (0..basis.len()).map(|i| linalg::unit(basis.len(), i, p)).collect()
    } else {
        linalg::kernel_of_columns(&cols, p)
    };
    kernel
        .iter()
        .map(|c| {
            c.iter().zip(basis).fold(vec![Fp::new(0, p); len], |acc, (ci, v)| {
                acc.iter().enumerate().map(|(m, a)| a.add(&ci.mul(v.get(m).unwrap_or(&Fp::new(0, p))))).collect()
            })
        })
        .collect()
}

/// Constants of K[[t]]/t^(N+1) under all θ^(k), k ≤ N.
pub fn series_constants(p: u32, order: usize) -> Vec<Series> {
    let basis: Vec<Series> = (0..=order).map(|m| linalg::unit(order + 1, m, p)).collect();
    constants(&basis, order)
}

/// A_{p^l} := θ^(p^l)(Y) Y^{-1} for a random polynomial Y with Y(0) = I.
pub fn conjugation_equation(
    rng: &mut crate::random::TestRng,
    p: u32,
    n: usize,
    depth: u32,
    degree: usize,
) -> Result<(IterableEquation, Mat), SolverError> {
    let mut entries = vec![];
    for i in 0..n {
        for j in 0..n {
            let mut c: Vec<Fp> = (0..=degree).map(|_| crate::random::fp(rng, p)).collect();
            c[0] = Fp::new((i == j) as i64, p);
            entries.push(RatFunc::from_poly(crate::algebra::Poly::new(c, p)));
        }
    }
    let y = Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone());
    let yi = y.inverse()?;
    let a = (0..depth)
        .map(|l| {
            let k = (p as usize).pow(l);
            y.map(|f| f.hasse(k)).mul(&yi)
        })
        .collect();
    Ok((IterableEquation::new(p, n, depth, a)?, y))
}

/// C with Y_solved = Y_known · C, if C is constant modulo t^(N+1).
pub fn constant_ratio(solved: &SeriesMatrix, known: &Mat) -> Option<Matrix<Fp>> {
    let known = SeriesMatrix::from_ratfunc_matrix(known, solved.order()).ok()?;
    let c = known.inverse()?.mul(solved);
    c.is_constant().then(|| c.coeff(0).clone())
}

/// Rank-1 equation for det Y: a_k = [T^k] det(Σ_k A_k T^k).
pub fn determinant_equation(eq: &IterableEquation) -> Result<IterableEquation, SolverError> {
    let p = eq.p;
    let top = (p as usize).pow(eq.depth - 1);
    let full = eq.prefix(top + 1);
    let len = full.len();
    let entry = |i: usize, j: usize| -> Vec<RatFunc> { full.iter().map(|m| m.get(i, j).clone()).collect() };
    let entries: Vec<Vec<Vec<RatFunc>>> = (0..eq.n).map(|i| (0..eq.n).map(|j| entry(i, j)).collect()).collect();
    let mut det = vec![RatFunc::zero(&p); len];
    for (perm, sign) in series::permutations(eq.n) {
        let mut term = vec![RatFunc::zero(&p); len];
        term[0] = RatFunc::from_int(&p, sign);
        for (i, &j) in perm.iter().enumerate() {
            let e = &entries[i][j];
            term = (0..len).map(|k| (0..=k).fold(RatFunc::zero(&p), |acc, r| acc.add(&term[r].mul(&e[k - r])))).collect();
        }
        det = det.iter().zip(&term).map(|(a, b)| a.add(b)).collect();
    }
    let a = (0..eq.depth).map(|l| Matrix::from_rows(vec![vec![det[(p as usize).pow(l)].clone()]]).expect("1x1")).collect();
    Ok(IterableEquation::new(p, 1, eq.depth, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m1(f: RatFunc) -> Mat {
        Matrix::from_rows(vec![vec![f]]).unwrap()
    }

    fn nil(p: u32) -> Mat {
        Matrix::from_rows(vec![vec![RatFunc::zero(&p), RatFunc::one(&p)], vec![RatFunc::zero(&p), RatFunc::zero(&p)]]).unwrap()
    }

    fn geometric(p: u32, depth: u32) -> IterableEquation {
        let inv = RatFunc::parse("1/(1+t)", p).unwrap();
        let a = (0..depth)
            .map(|l| {
                let q = (p as u64).pow(l);
                let sign = if q % 2 == 0 { 1 } else { -1 };
                m1(inv.pow(q).mul(&RatFunc::from_int(&p, sign)))
            })
            .collect();
        IterableEquation::new(p, 1, depth, a).unwrap()
    }

    #[test]
    fn zero_equation_gives_identity() {
        let eq = IterableEquation::new(3, 2, 3, vec![Matrix::zero(2, 2, &3); 3]).unwrap();
        assert_eq!(solve_fundamental(&eq, 20).unwrap(), SeriesMatrix::identity(2, 3, 20));
    }

    #[test]
    fn geometric_series() {
        for (p, depth, order) in [(2, 6, 40), (3, 4, 60), (5, 3, 30)] {
            let y = solve_fundamental(&geometric(p, depth), order).unwrap();
            // (1+t)^{-1} = Σ (-1)^m t^m
            let expected: Series = (0..=order).map(|m| Fp::new(if m % 2 == 0 { 1 } else { -1 }, p)).collect();
            assert_eq!(y.entry(0, 0), expected);
        }
    }

    #[test]
    fn unipotent_example() {
        let p = 2;
        let mut a = vec![nil(p), nil(p)];
        a.extend((2..5).map(|_| Matrix::zero(2, 2, &p)));
        let eq = IterableEquation::new(p, 2, 5, a).unwrap();
        let y = solve_fundamental(&eq, 20).unwrap();
        let mut t_t2 = vec![Fp::new(0, p); 21];
        t_t2[1] = Fp::new(1, p);
        t_t2[2] = Fp::new(1, p);
        assert_eq!(y.entry(0, 1), t_t2);
        assert_eq!(y.entry(0, 0), linalg::unit(21, 0, p));
        assert!(y.entry(1, 0).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn residual_checks() {
        let p = 2;
        let eq = IterableEquation::new(p, 2, 2, vec![nil(p), nil(p)]).unwrap();
        let t = Matrix::from_rows(vec![vec![RatFunc::one(&p), RatFunc::t(p)], vec![RatFunc::zero(&p), RatFunc::one(&p)]]).unwrap();
        let y = SeriesMatrix::from_ratfunc_matrix(&t, 3).unwrap();
        let r = verify_solution(&y, &eq, 3);
        assert_eq!(r.first_failure().map(|f| f.0), Some(2));
        let r = verify_solution(&SeriesMatrix::identity(2, p, 3), &eq, 3);
        assert_eq!(r.first_failure(), Some((1, 0)));
        let good = solve_fundamental(&eq, 3).unwrap();
        assert!(verify_solution(&good, &eq, 3).verdict());
    }

    #[test]
    fn errors() {
        let p = 3;
        assert!(matches!(solve_fundamental(&geometric(p, 2), 9), Err(SolverError::DepthTooSmall { .. })));
        let pole = IterableEquation::new(p, 1, 2, vec![m1(RatFunc::parse("1/t", p).unwrap()), m1(RatFunc::zero(&p))]).unwrap();
        assert!(matches!(solve_fundamental(&pole, 5), Err(SolverError::PoleAtOrigin { order: 1 })));
        // θ^(1)(y) = y forces 3 A_3 = 1/2 over F_3, so A_3 = 0 is inconsistent
        let bad = IterableEquation::new(p, 1, 2, vec![m1(RatFunc::one(&p)), m1(RatFunc::zero(&p))]).unwrap();
        assert!(!bad.check().verdict);
        assert!(matches!(solve_fundamental(&bad, 8), Err(SolverError::Inconsistent { order: 1, degree: 2 })));
    }

    #[test]
    fn constants_of_series_spaces() {
        for p in [2, 3, 5] {
            let c = series_constants(p, 16);
            assert_eq!(c, vec![linalg::unit(17, 0, p)]);
        }
        // {1, t^p}: θ^(1) alone keeps both, the full set drops t^p
        let p = 3;
        let basis = vec![linalg::unit(4, 0, p), linalg::unit(4, 3, p)];
        assert_eq!(constants(&basis, 1).len(), 2);
        assert_eq!(constants(&basis, 3).len(), 1);
        let scalars = vec![linalg::unit(1, 0, p)];
        assert_eq!(constants(&scalars, 5), scalars);
    }

    #[test]
    fn conjugation_round_trip_and_determinant() {
        let mut rng = crate::random::rng(11);
        for _ in 0..5 {
            let (eq, y) = conjugation_equation(&mut rng, 3, 2, 3, 2).unwrap();
            assert!(eq.check().verdict);
            let solved = solve_fundamental(&eq, 20).unwrap();
            assert_eq!(constant_ratio(&solved, &y), Some(Matrix::identity(2, &3)));
            let det = solve_fundamental(&determinant_equation(&eq).unwrap(), 20).unwrap();
            assert_eq!(det.entry(0, 0), solved.det());
        }
    }
}
