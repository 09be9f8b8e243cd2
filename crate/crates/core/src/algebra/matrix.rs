use std::fmt;

use super::error::AlgebraError;
use super::ring::{Field, Ring};

/// Dense matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<C: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

/// Result of [`Matrix::solve`]: one particular solution and a kernel basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet<C: Ring> {
    pub particular: Vec<C>,
    pub kernel: Vec<Vec<C>>,
}

impl<C: Ring> Matrix<C> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C) -> Self {
        let data = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(AlgebraError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zero(rows: usize, cols: usize, ctx: &C::Ctx) -> Self {
        Matrix::from_fn(rows, cols, |_, _| C::zero(ctx))
    }

    pub fn identity(n: usize, ctx: &C::Ctx) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { C::one(ctx) } else { C::zero(ctx) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &C> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<C>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<D: Ring, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<Matrix<D>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    fn check_same(&self, o: &Self) -> Result<(), AlgebraError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(AlgebraError::DimensionMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check_same(o)?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check_same(o)?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, AlgebraError> {
        if self.cols != o.rows {
            return Err(AlgebraError::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let ctx = self.data.first().or(o.data.first()).map(|c| c.ctx());
        Ok(Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc: Option<C> = None;
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let prod = a.mul(o.get(k, j));
                acc = Some(match acc {
                    None => prod,
                    Some(s) => s.add(&prod),
                });
            }
            acc.unwrap_or_else(|| C::zero(ctx.as_ref().unwrap()))
        }))
    }

    /// Panicking product for internal use where dimensions are known.
    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("matrix dimensions")
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("matrix dimensions")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("matrix dimensions")
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(v[0].zero_like(), |acc, (a, b)| acc.add(&a.mul(b)))).collect()
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| self.get(i / o.rows, j / o.cols).mul(o.get(i % o.rows, j % o.cols)))
    }
}

impl<C: Field> Matrix<C> {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel {x : A x = 0}.
    pub fn kernel(&self, ctx: &C::Ctx) -> Vec<Vec<C>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![C::zero(ctx); self.cols];
                v[f] = C::one(ctx);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, f).neg();
                }
                v
            })
            .collect()
    }

    /// Solves A x = b: a particular solution plus a kernel basis.
    pub fn solve(&self, b: &[C], ctx: &C::Ctx) -> Result<SolutionSet<C>, AlgebraError> {
        if b.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch("right-hand side length".into()));
        }
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| if j < self.cols { self.get(i, j).clone() } else { b[i].clone() });
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(AlgebraError::Inconsistent);
        }
        let mut particular = vec![C::zero(ctx); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            particular[pc] = aug.get(r, self.cols).clone();
        }
        Ok(SolutionSet { particular, kernel: self.kernel(ctx) })
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let ctx = self.data[0].ctx();
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                C::one(&ctx)
            } else {
                C::zero(&ctx)
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Matrix::from_fn(n, n, |i, j| aug.get(i, j + n).clone()))
    }

    pub fn det(&self) -> C {
        assert!(self.is_square());
        let n = self.rows;
        let ctx = self.data.first().map(|c| c.ctx());
        let Some(ctx) = ctx else { panic!("determinant of empty matrix needs a context") };
        let mut m = self.clone();
        let mut det = C::one(&ctx);
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return C::zero(&ctx);
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, RatFunc};

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s, 2).unwrap()
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::<RatFunc>::identity(2, &2);
        let b = vec![rf("t"), rf("1/t")];
        let s = id.solve(&b, &2).unwrap();
        assert_eq!(s.particular, b);
        assert!(s.kernel.is_empty());

        let z = Matrix::<RatFunc>::zero(2, 3, &2);
        let s = z.solve(&[rf("0"), rf("0")], &2).unwrap();
        assert_eq!(s.kernel.len(), 3);

        let a = Matrix::from_rows(vec![vec![rf("t"), rf("1")], vec![rf("0"), rf("1")]]).unwrap();
        let s = a.solve(&[rf("1"), rf("1")], &2).unwrap();
        assert_eq!(s.particular, vec![rf("0"), rf("1")]);
    }

    #[test]
    fn inconsistent_system() {
        let a = Matrix::from_rows(vec![vec![Fp::new(1, 3)], vec![Fp::new(1, 3)]]).unwrap();
        let r = a.solve(&[Fp::new(0, 3), Fp::new(1, 3)], &3);
        assert_eq!(r, Err(AlgebraError::Inconsistent));
    }

    #[test]
    fn inverse_and_det() {
        let a = Matrix::from_rows(vec![vec![rf("1"), rf("t")], vec![rf("0"), rf("1")]]).unwrap();
        let ai = a.inverse().unwrap();
        assert_eq!(a.mul(&ai), Matrix::identity(2, &2));
        assert_eq!(a.det(), rf("1"));
    }
}
