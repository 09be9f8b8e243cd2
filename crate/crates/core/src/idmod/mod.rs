//! One-variable iterative differential modules over F = F_p(t).
//!
//! Conventions used throughout:
//! * θ = φ_t, so θ^(k) is the k-th Hasse derivative on F.
//! * A module structure is Θ(x) = Â(T) θ(x) on coordinate vectors, hence
//!   Θ^(k)(x) = Σ_{a+b=k} Â_a θ^(b)(x) and Θ^(p^l)(e_j) = Â_{p^l} e_j.
//! * An equation is θ^(k)(Y) = A_k Y; horizontal vectors of Θ are solutions
//!   of the equation with A(T) = Â(T)^{-1}.
//!
//! Only the p-power matrices are stored; the others follow from the iteration
//! rule through the base-p digits of k.

mod bridge;
mod descent;
mod fcsystem;

pub use bridge::{connection_from_structure, one_variable_integrability, structure_from_connection, OneVariableReport};
pub use descent::kernel_descent;
pub use fcsystem::FcProjSystem;

use thiserror::Error;

use crate::algebra::{binomial_in, binomial_mod_p, check_prime, AlgebraError, Fp, Matrix, RatFunc, Ring};

#[derive(Debug, Error)]
pub enum IdmodError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("kernel at level {level} has rank {rank}, expected {expected}")]
    RankDefect { level: u32, rank: usize, expected: usize },
    #[error("induced structure at level {level} does not descend: {reason}")]
    NotDescendable { level: u32, reason: String },
    #[error("B_{level}^-1 B_{next} is not in GL_n(F^(p^{level}))", next = level + 1)]
    InvariantViolation { level: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("level {level} exceeds the supported bound {max}")]
    LevelTooLarge { level: u32, max: u32 },
}

pub type Mat = Matrix<RatFunc>;

pub(crate) fn identity(n: usize, p: u32) -> Mat {
    Matrix::identity(n, &p)
}

/// θ^(k)(M) for k = 0..=kmax, entrywise.
pub(crate) fn theta_series(m: &Mat, kmax: usize) -> Vec<Mat> {
    let entries: Vec<Vec<RatFunc>> = m.entries().map(|f| f.hasse_series(kmax)).collect();
    (0..=kmax).map(|k| Matrix::from_fn(m.rows(), m.cols(), |i, j| entries[i * m.cols() + j][k].clone())).collect()
}

/// Truncated product of matrix power series, keeping `len` terms.
pub(crate) fn series_mul(a: &[Mat], b: &[Mat], len: usize) -> Vec<Mat> {
    let (r, c) = (a[0].rows(), b[0].cols());
    let p = a[0].get(0, 0).p();
    (0..len)
        .map(|k| {
            let mut acc = Matrix::zero(r, c, &p);
            for i in 0..=k {
                if i < a.len() && k - i < b.len() && !a[i].is_zero() && !b[k - i].is_zero() {
                    acc = acc.add(&a[i].mul(&b[k - i]));
                }
            }
            acc
        })
        .collect()
}

/// Inverse of a matrix power series with identity constant term.
pub(crate) fn series_inverse_unipotent(a: &[Mat]) -> Vec<Mat> {
    let n = a[0].rows();
    let p = a[0].get(0, 0).p();
    let mut out = vec![identity(n, p)];
    for k in 1..a.len() {
        let mut acc = Matrix::zero(n, n, &p);
        for i in 1..=k {
            acc = acc.sub(&a[i].mul(&out[k - i]));
        }
        out.push(acc);
    }
    out
}

/// Top base-p place and digit of k: k = d p^j + rest with rest < p^j.
fn top_digit(k: usize, p: usize) -> (usize, usize, usize) {
    let mut pj = 1;
    while pj * p <= k {
        pj *= p;
    }
    (pj, k / pj, k % pj)
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    /// Θ^(i) ∘ Θ^(j): Σ_{a+b=i} Â_a θ^(b)(Â_j).
    Module,
    /// θ^(i) applied to A_k Y: Σ_{a+b=i} θ^(a)(A_k) A_b.
    Equation,
}

/// Fills in every index below `bound` from the p-power terms, splitting off
/// the top base-p digit: k = d p^j + rest.  For rest > 0 the binomial
/// C(k, rest) is 1; for rest = 0 it is d.
fn generate(p: u32, n: usize, bound: usize, powers: &[Mat], side: Side) -> Vec<Mat> {
    let pu = p as usize;
    let mut out: Vec<Mat> = vec![identity(n, p)];
    let mut thetas: Vec<Option<Vec<Mat>>> = vec![None; bound];
    for k in 1..bound {
        let (pj, d, rest) = top_digit(k, pu);
        if d == 1 && rest == 0 {
            out.push(powers[pj.ilog(pu) as usize].clone());
            continue;
        }
        let (base, upto) = if rest > 0 { (d * pj, rest) } else { ((d - 1) * pj, pj) };
        let th = thetas[base].get_or_insert_with(|| theta_series(&out[base], pj));
        let sum = (0..=upto).fold(Matrix::zero(n, n, &p), |acc, i| {
            let term = match side {
                Side::Module => out[i].mul(&th[upto - i]),
                Side::Equation => th[i].mul(&out[upto - i]),
            };
            acc.add(&term)
        });
        if rest > 0 {
            out.push(sum);
        } else {
            let dinv = RatFunc::constant(Fp::new(d as i64, p)).try_inverse().expect("digit is a unit");
            out.push(sum.scale(&dinv));
        }
    }
    out
}

fn checked_depth(p: u32, depth: u32) -> Result<usize, IdmodError> {
    check_prime(p)?;
    // largest L with p^L ≤ 4096
    let max = (1..).take_while(|&l| (p as usize).pow(l) <= 4096).last().unwrap_or(0);
    if depth > max {
        return Err(IdmodError::LevelTooLarge { level: depth, max });
    }
    Ok((p as usize).pow(depth))
}

fn check_square(mats: &[Mat], n: usize) -> Result<(), IdmodError> {
    for (l, m) in mats.iter().enumerate() {
        if m.rows() != n || m.cols() != n {
            return Err(IdmodError::DimensionMismatch(format!("matrix {l} is {}x{}, rank is {n}", m.rows(), m.cols())));
        }
    }
    Ok(())
}

/// First (i, j) where an iteration identity fails.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatReport {
    pub verdict: bool,
    pub bound: usize,
    pub first_failure: Option<(usize, usize)>,
}

impl std::fmt::Display for CompatReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.first_failure {
            None => write!(f, "iteration rule holds for all i+j < {}", self.bound),
            Some((i, j)) => write!(f, "iteration rule fails at (i,j)=({i},{j})"),
        }
    }
}

/// Iterative structure Θ on F^n given by Â_{p^l}, 0 ≤ l < L.
#[derive(Clone, Debug, PartialEq)]
pub struct IdStructure {
    pub p: u32,
    pub n: usize,
    pub depth: u32,
    pub c: Vec<Mat>,
}

impl IdStructure {
    pub fn new(p: u32, n: usize, depth: u32, c: Vec<Mat>) -> Result<Self, IdmodError> {
        checked_depth(p, depth)?;
        if c.len() != depth as usize {
            return Err(IdmodError::DimensionMismatch(format!("{} matrices for depth {depth}", c.len())));
        }
        check_square(&c, n)?;
        Ok(IdStructure { p, n, depth, c })
    }

    pub fn trivial(p: u32, n: usize, depth: u32) -> Self {
        IdStructure { p, n, depth, c: vec![Matrix::zero(n, n, &p); depth as usize] }
    }

    pub fn bound(&self) -> usize {
        (self.p as usize).pow(self.depth)
    }

    /// Â_0..Â_{p^L - 1}, the non-p-power terms derived by the iteration rule.
    pub fn full(&self) -> Vec<Mat> {
        generate(self.p, self.n, self.bound(), &self.c, Side::Module)
    }

    /// Checks C(i+j, i) Â_{i+j} = Σ_{a+b=i} Â_a θ^(b)(Â_j) for i, j ≥ 1, i+j < p^L.
    pub fn check(&self) -> CompatReport {
        check_module_form(&self.full(), self.p)
    }

    /// Θ^(k)(x) for a coordinate vector x.
    pub fn apply(&self, full: &[Mat], k: usize, x: &[RatFunc]) -> Vec<RatFunc> {
        let thx: Vec<Vec<RatFunc>> = x.iter().map(|f| f.hasse_series(k)).collect();
        let mut out = vec![RatFunc::zero(&self.p); self.n];
        for a in 0..=k {
            let v: Vec<RatFunc> = thx.iter().map(|s| s[k - a].clone()).collect();
            for (o, y) in out.iter_mut().zip(full[a].mul_vec(&v)) {
                *o = o.add(&y);
            }
        }
        out
    }

    /// The equivalent equation θ(Y) = A(T) Y with A = Â^{-1}.
    pub fn to_equation(&self) -> IterableEquation {
        let inv = series_inverse_unipotent(&self.full());
        let a = (0..self.depth).map(|l| inv[(self.p as usize).pow(l)].clone()).collect();
        IterableEquation { p: self.p, n: self.n, depth: self.depth, a }
    }
}

pub(crate) fn check_module_form(full: &[Mat], p: u32) -> CompatReport {
    let bound = full.len();
    let thetas: Vec<Vec<Mat>> = full.iter().map(|m| theta_series(m, bound.saturating_sub(1))).collect();
    for total in 2..bound {
        for i in 1..total {
            let j = total - i;
            let lhs = full[total].scale(&binomial_in::<RatFunc>(&p, total as u64, i as u64));
            let rhs = (0..=i).fold(Matrix::zero(full[0].rows(), full[0].cols(), &p), |acc, a| acc.add(&full[a].mul(&thetas[j][i - a])));
            if lhs != rhs {
                return CompatReport { verdict: false, bound, first_failure: Some((i, j)) };
            }
        }
    }
    CompatReport { verdict: true, bound, first_failure: None }
}

/// The equation-side iteration rule on a full list A_0..A_{b-1}.
pub fn check_equation_form(full: &[Mat], p: u32) -> CompatReport {
    let bound = full.len();
    let thetas: Vec<Vec<Mat>> = full.iter().map(|m| theta_series(m, bound.saturating_sub(1))).collect();
    for total in 2..bound {
        for k in 1..total {
            let l = total - k;
            let lhs = full[total].scale(&binomial_in::<RatFunc>(&p, total as u64, l as u64));
            let rhs = (0..=l).fold(Matrix::zero(full[0].rows(), full[0].cols(), &p), |acc, i| acc.add(&thetas[k][i].mul(&full[l - i])));
            if lhs != rhs {
                return CompatReport { verdict: false, bound, first_failure: Some((k, l)) };
            }
        }
    }
    CompatReport { verdict: true, bound, first_failure: None }
}

/// Iterable equation θ^(k)(Y) = A_k Y given by A_{p^l}, 0 ≤ l < L.
#[derive(Clone, Debug, PartialEq)]
pub struct IterableEquation {
    pub p: u32,
    pub n: usize,
    pub depth: u32,
    pub a: Vec<Mat>,
}

impl IterableEquation {
    pub fn new(p: u32, n: usize, depth: u32, a: Vec<Mat>) -> Result<Self, IdmodError> {
        checked_depth(p, depth)?;
        if a.len() != depth as usize {
            return Err(IdmodError::DimensionMismatch(format!("{} matrices for depth {depth}", a.len())));
        }
        check_square(&a, n)?;
        Ok(IterableEquation { p, n, depth, a })
    }

    pub fn bound(&self) -> usize {
        (self.p as usize).pow(self.depth)
    }

    /// A_0..A_{p^L - 1}.
    pub fn full(&self) -> Vec<Mat> {
        generate(self.p, self.n, self.bound(), &self.a, Side::Equation)
    }

    /// A_0..A_{len - 1}, with len capped at p^L.
    pub fn prefix(&self, len: usize) -> Vec<Mat> {
        generate(self.p, self.n, len.min(self.bound()), &self.a, Side::Equation)
    }

    /// Checks C(k+l, l) A_{k+l} = Σ_{i+j=l} θ^(i)(A_k) A_j for k, l ≥ 1, k+l < p^L.
    pub fn check(&self) -> CompatReport {
        check_equation_form(&self.full(), self.p)
    }

    pub fn to_structure(&self) -> IdStructure {
        let inv = series_inverse_unipotent(&self.full());
        let c = (0..self.depth).map(|l| inv[(self.p as usize).pow(l)].clone()).collect();
        IdStructure { p: self.p, n: self.n, depth: self.depth, c }
    }
}

/// Both membership tests for F^(p^l): the kernel of θ^(j), 0 < j < p^l, and
/// repeated p-th roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobeniusCompatibility {
    pub kernel: bool,
    pub pth_power: bool,
}

impl FrobeniusCompatibility {
    pub fn agree(&self) -> bool {
        self.kernel == self.pth_power
    }
}

pub fn frobenius_compatibility(f: &RatFunc, l: u32) -> Result<FrobeniusCompatibility, IdmodError> {
    if l > 4 {
        return Err(IdmodError::LevelTooLarge { level: l, max: 4 });
    }
    let q = (f.p() as usize).pow(l);
    let kernel = q <= 1 || f.hasse_series(q - 1).iter().skip(1).all(|x| x.is_zero());
    Ok(FrobeniusCompatibility { kernel, pth_power: f.pth_root_iter(l).is_ok() })
}

/// Whether every entry lies in F^(p^l).
pub(crate) fn is_frobenius_power(m: &Mat, l: u32) -> bool {
    m.entries().all(|f| f.pth_root_iter(l).is_ok())
}

/// Digit-wise binomial, exposed for the closed-form checks in tests.
pub fn binom(n: u64, k: u64, p: u32) -> Fp {
    binomial_mod_p(n, k, p)
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
    fn frobenius_membership_examples() {
        let f = rf("t^2+t^4", 2);
        assert_eq!(frobenius_compatibility(&f, 1).unwrap(), FrobeniusCompatibility { kernel: true, pth_power: true });
        assert_eq!(frobenius_compatibility(&f, 2).unwrap(), FrobeniusCompatibility { kernel: false, pth_power: false });
        assert!(!frobenius_compatibility(&rf("t^2/(1+t)", 2), 1).unwrap().kernel);
        assert!(frobenius_compatibility(&rf("3", 5), 4).unwrap().kernel);
        assert!(frobenius_compatibility(&f, 5).is_err());
    }

    #[test]
    fn equation_examples_pass() {
        let p = 2;
        let zero = IterableEquation::new(p, 2, 3, vec![Matrix::zero(2, 2, &p); 3]).unwrap();
        assert!(zero.check().verdict);
        let u = mat(&[&["0", "1"], &["0", "0"]], p);
        let e = IterableEquation::new(p, 2, 3, vec![u.clone(), u, Matrix::zero(2, 2, &p)]).unwrap();
        assert!(e.check().verdict);
        for (p, depth) in [(2, 3), (3, 3), (5, 2)] {
            let a = (0..depth).map(|l| {
                let q = (p as usize).pow(l);
                let s = if q % 2 == 0 { "1" } else { "-1" };
                mat(&[&[&format!("{s}/(1+t)^{q}")]], p)
            });
            let e = IterableEquation::new(p, 1, depth, a.collect()).unwrap();
            assert!(e.check().verdict, "p={p}");
            let full = e.full();
            for (k, ak) in full.iter().enumerate() {
                let s = if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(*ak.get(0, 0), rf(&format!("{s}/(1+t)^{k}"), p), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn non_iterative_structure_is_caught() {
        let p = 2;
        let s = IdStructure::new(p, 1, 2, vec![mat(&[&["1"]], p), Matrix::zero(1, 1, &p)]).unwrap();
        assert_eq!(s.check().first_failure, Some((1, 1)));
        assert!(!s.to_equation().check().verdict);
    }

    #[test]
    fn structure_and_equation_agree() {
        let p = 3;
        let s = IdStructure::new(p, 2, 2, vec![mat(&[&["0", "1"], &["0", "0"]], p), Matrix::zero(2, 2, &p)]).unwrap();
        assert!(s.check().verdict);
        let e = s.to_equation();
        assert!(e.check().verdict);
        assert_eq!(e.to_structure(), s);
    }
}
