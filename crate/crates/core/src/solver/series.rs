//! Matrices of power series over F_p, known modulo t^(N+1).

use std::fmt;

use crate::algebra::{binomial_mod_p, AlgebraError, Fp, Matrix, RatFunc, Ring};

/// Truncated scalar series, coefficient of t^m at index m.
pub type Series = Vec<Fp>;

pub fn series_mul(a: &[Fp], b: &[Fp], len: usize) -> Series {
    let p = a.first().or(b.first()).map_or(2, |c| c.modulus());
    (0..len)
        .map(|k| (0..=k).filter(|&i| i < a.len() && k - i < b.len()).fold(Fp::new(0, p), |acc, i| acc.add(&a[i].mul(&b[k - i]))))
        .collect()
}

/// θ^(k) on a truncated series: t^m ↦ C(m, k) t^(m-k).
pub fn series_hasse(a: &[Fp], k: usize) -> Series {
    (k..a.len()).map(|m| a[m].mul(&binomial_mod_p(m as u64, k as u64, a[m].modulus()))).collect()
}

pub fn render_series(a: &[Fp]) -> String {
    let terms: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| {
            let mono = match m {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{m}"),
            };
            match (c.value(), m) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Clone, PartialEq)]
pub struct SeriesMatrix {
    p: u32,
    n: usize,
    coeffs: Vec<Matrix<Fp>>,
}

impl SeriesMatrix {
    /// `coeffs[m]` is the matrix coefficient of t^m; must be nonempty and square.
    pub fn from_coeffs(p: u32, coeffs: Vec<Matrix<Fp>>) -> Result<Self, AlgebraError> {
        let n = coeffs.first().ok_or_else(|| AlgebraError::DimensionMismatch("empty series".into()))?.rows();
        if coeffs.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(AlgebraError::DimensionMismatch("coefficients of unequal shape".into()));
        }
        Ok(SeriesMatrix { p, n, coeffs })
    }

    pub fn identity(n: usize, p: u32, order: usize) -> Self {
        let mut coeffs = vec![Matrix::zero(n, n, &p); order + 1];
        coeffs[0] = Matrix::identity(n, &p);
        SeriesMatrix { p, n, coeffs }
    }

    /// Expansion at t = 0; fails on a pole there.
    pub fn from_ratfunc_matrix(m: &Matrix<RatFunc>, order: usize) -> Result<Self, AlgebraError> {
        let p = m.get(0, 0).p();
        let entries: Vec<Series> = m.entries().map(|f| f.series(order)).collect::<Result<_, _>>()?;
        let n = m.rows();
        let coeffs = (0..=order).map(|k| Matrix::from_fn(n, n, |i, j| entries[i * n + j][k])).collect();
        Ok(SeriesMatrix { p, n, coeffs })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Known modulo t^(order + 1).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &Matrix<Fp> {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Matrix<Fp>] {
        &self.coeffs
    }

    pub fn entry(&self, i: usize, j: usize) -> Series {
        self.coeffs.iter().map(|c| *c.get(i, j)).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        SeriesMatrix { p: self.p, n: self.n, coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let len = self.coeffs.len().min(o.coeffs.len());
        let coeffs = (0..len)
            .map(|k| (0..=k).fold(Matrix::zero(self.n, o.n, &self.p), |acc, i| acc.add(&self.coeffs[i].mul(&o.coeffs[k - i]))))
            .collect();
        SeriesMatrix { p: self.p, n: self.n, coeffs }
    }

    /// θ^(k)(Y), known modulo t^(order - k + 1); None when k > order.
    pub fn theta(&self, k: usize) -> Option<Self> {
        if k > self.order() {
            return None;
        }
        let coeffs = (k..=self.order()).map(|m| self.coeffs[m].scale(&binomial_mod_p(m as u64, k as u64, self.p))).collect();
        Some(SeriesMatrix { p: self.p, n: self.n, coeffs })
    }

    pub fn inverse(&self) -> Option<Self> {
        let y0i = self.coeffs[0].inverse().ok()?;
        let mut out = vec![y0i.clone()];
        for m in 1..self.coeffs.len() {
            let acc = (1..=m).fold(Matrix::zero(self.n, self.n, &self.p), |acc, i| acc.add(&self.coeffs[i].mul(&out[m - i])));
            out.push(y0i.mul(&acc).scale(&Fp::new(-1, self.p)));
        }
        Some(SeriesMatrix { p: self.p, n: self.n, coeffs: out })
    }

    /// Leibniz expansion with truncated products.
    pub fn det(&self) -> Series {
        let len = self.coeffs.len();
        let entries: Vec<Vec<Series>> = (0..self.n).map(|i| (0..self.n).map(|j| self.entry(i, j)).collect()).collect();
        let mut total = vec![Fp::new(0, self.p); len];
        for (perm, sign) in permutations(self.n) {
            let mut term = vec![Fp::new(0, self.p); len];
            term[0] = Fp::new(sign, self.p);
            for (i, &j) in perm.iter().enumerate() {
                term = series_mul(&term, &entries[i][j], len);
            }
            total = total.iter().zip(&term).map(|(a, b)| a.add(b)).collect();
        }
        total
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().skip(1).all(Matrix::is_zero)
    }

    pub fn render_entries(&self) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| render_series(&self.entry(i, j))).collect()).collect()
    }
}

/// Permutations of 0..n with their signs.
pub(crate) fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = vec![];
    for (perm, sign) in permutations(n - 1) {
        // insert n-1 at position i; it passes n-1-i larger-index slots
        for i in 0..=perm.len() {
            let mut q = perm.clone();
            q.insert(i, n - 1);
            let s = if (perm.len() - i) % 2 == 0 { sign } else { -sign };
            out.push((q, s));
        }
    }
    out
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.render_entries().into_iter().map(|r| format!("[{}]", r.join(", "))).collect();
        write!(f, "[{}] + O(t^{})", rows.join(", "), self.order() + 1)
    }
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64], p: u32) -> Series {
        v.iter().map(|&c| Fp::new(c, p)).collect()
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|(_, s)| s).sum::<i64>(), 0);
        // the sign is (-1)^(inversions)
        for (perm, sign) in perms {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            assert_eq!(sign, if inv % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn hasse_of_monomials() {
        // θ^(2)(t^3) = 3 t over F_5
        assert_eq!(series_hasse(&s(&[0, 0, 0, 1], 5), 2), s(&[0, 3], 5));
        assert_eq!(render_series(&s(&[1, 0, 2, 1], 3)), "1 + 2*t^2 + t^3");
    }

    #[test]
    fn inverse_and_determinant() {
        let p = 3;
        let m = Matrix::from_rows(vec![
            vec![RatFunc::parse("1+t", p).unwrap(), RatFunc::parse("t^2", p).unwrap()],
            vec![RatFunc::parse("2*t", p).unwrap(), RatFunc::parse("1/(1-t)", p).unwrap()],
        ])
        .unwrap();
        let y = SeriesMatrix::from_ratfunc_matrix(&m, 8).unwrap();
        let yi = y.inverse().unwrap();
        assert_eq!(y.mul(&yi), SeriesMatrix::identity(2, p, 8));
        let d = m.det().series(8).unwrap();
        assert_eq!(y.det(), d);
    }
}
