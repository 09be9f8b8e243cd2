//! Finite θ-rings R = F[r_1..r_s]/(r_i^p - σ_i) over F = F_p(t)(σ).
//!
//! θ is recorded as a truncated series θ(x) = Σ_{k<p^L} θ^(k)(x) T^k.  On
//! generators it is θ(r) = r·u(T) (diagonal) or θ(r) = r + w(T) (additive);
//! on σ = r^p it is forced: σ·u^p or σ + w^p, with Frobenius acting on
//! coefficients and T ↦ T^p.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::algebra::{binomial_in, Matrix, RatFunc, Ring};
use crate::idmod::{check_equation_form, IterableEquation};

use super::sigma::SigmaPoly;
use super::GaloisError;

/// Coordinates in the F-basis r^e, e ∈ [0, p)^s, index Σ e_i p^i.
pub type RElem = Vec<SigmaPoly>;

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// θ(r) = r·u(T), u_0 = 1.
    Diagonal(Vec<RatFunc>),
    /// θ(r) = r + w(T), w_0 = 0.
    Additive(Vec<RatFunc>),
}

impl Generator {
    pub fn series(&self) -> &[RatFunc] {
        match self {
            Generator::Diagonal(u) | Generator::Additive(u) => u,
        }
    }

    /// From θ^(p^l)(r) = c_l r, l < L, via the digit formula.
    pub fn diagonal_from_ide(p: u32, depth: u32, c: &[RatFunc]) -> Result<Self, GaloisError> {
        let mats = c.iter().map(|x| Matrix::from_rows(vec![vec![x.clone()]]).expect("1x1")).collect();
        let eq = IterableEquation::new(p, 1, depth, mats)?;
        let full = eq.full();
        let rep = check_equation_form(&full, p);
        if !rep.verdict {
            return Err(GaloisError::IterativityFailure(rep.to_string()));
        }
        Ok(Generator::Diagonal(full.iter().map(|m| m.get(0, 0).clone()).collect()))
    }

    /// From θ^(p^l)(r) = c_l, through the unipotent system for (1 r; 0 1).
    pub fn additive_from_ide(p: u32, depth: u32, c: &[RatFunc]) -> Result<Self, GaloisError> {
        let zero = RatFunc::zero(&p);
        let mats = c
            .iter()
            .map(|x| Matrix::from_rows(vec![vec![zero.clone(), x.clone()], vec![zero.clone(), zero.clone()]]).expect("2x2"))
            .collect();
        let eq = IterableEquation::new(p, 2, depth, mats)?;
        let full = eq.full();
        let rep = check_equation_form(&full, p);
        if !rep.verdict {
            return Err(GaloisError::IterativityFailure(rep.to_string()));
        }
        let mut w: Vec<RatFunc> = full.iter().map(|m| m.get(0, 1).clone()).collect();
        w[0] = zero;
        Ok(Generator::Additive(w))
    }
}

pub struct ThetaRing {
    p: u32,
    depth: u32,
    gens: Vec<Generator>,
    theta_sigma: Vec<Vec<SigmaPoly>>,
    theta_sigma_inv: Vec<Vec<SigmaPoly>>,
    theta_basis: Vec<Vec<RElem>>,
    sigma_cache: RefCell<HashMap<Vec<i32>, Rc<Vec<SigmaPoly>>>>,
}

impl fmt::Debug for ThetaRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThetaRing").field("p", &self.p).field("depth", &self.depth).field("gens", &self.gens).finish()
    }
}

/// Truncated product of scalar series.
pub(crate) fn smul(a: &[SigmaPoly], b: &[SigmaPoly], len: usize) -> Vec<SigmaPoly> {
    let ctx = a[0].ctx();
    (0..len)
        .map(|k| {
            (0..=k).fold(SigmaPoly::zero(&ctx), |acc, i| {
                if i < a.len() && k - i < b.len() && !a[i].is_zero() && !b[k - i].is_zero() {
                    acc.add(&a[i].mul(&b[k - i]))
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Inverse of a scalar series whose constant term is a unit.
fn sinv(a: &[SigmaPoly]) -> Option<Vec<SigmaPoly>> {
    let c0 = a[0].try_inverse()?;
    let ctx = a[0].ctx();
    let mut out = vec![c0.clone()];
    for k in 1..a.len() {
        let acc = (1..=k).fold(SigmaPoly::zero(&ctx), |acc, i| acc.add(&a[i].mul(&out[k - i])));
        out.push(acc.mul(&c0).neg());
    }
    Some(out)
}

impl ThetaRing {
    /// Builds the ring and verifies well-definedness and iterativity.
    pub fn new(p: u32, depth: u32, gens: Vec<Generator>) -> Result<Self, GaloisError> {
        let r = Self::build(p, depth, gens)?;
        r.check_relations()?;
        let rep = r.iterativity();
        if let Some(msg) = rep {
            return Err(GaloisError::IterativityFailure(msg));
        }
        Ok(r)
    }

    fn build(p: u32, depth: u32, gens: Vec<Generator>) -> Result<Self, GaloisError> {
        crate::algebra::check_prime(p).map_err(crate::idmod::IdmodError::from)?;
        if depth == 0 || depth > 5 {
            return Err(GaloisError::Parameter(format!("depth {depth} outside 1..=5")));
        }
        let k = (p as usize).pow(depth);
        let s = gens.len();
        for (i, g) in gens.iter().enumerate() {
            let ser = g.series();
            let ok = ser.len() == k
                && ser.iter().all(|x| x.p() == p)
                && match g {
                    Generator::Diagonal(u) => u[0].is_one(),
                    Generator::Additive(w) => w[0].is_zero(),
                };
            if !ok {
                return Err(GaloisError::Parameter(format!(
                    "generator {} needs a series of length {k} with the right constant term",
                    i + 1
                )));
            }
        }
        let frob = |x: &[RatFunc]| -> Vec<RatFunc> {
            (0..k).map(|j| if j % p as usize == 0 { x[j / p as usize].pow(p as u64) } else { RatFunc::zero(&p) }).collect()
        };
        let mut theta_sigma = vec![];
        let mut theta_sigma_inv = vec![];
        for (i, g) in gens.iter().enumerate() {
            let sig = SigmaPoly::sigma(p, s, i);
            let ser: Vec<SigmaPoly> = match g {
                Generator::Diagonal(u) => frob(u).into_iter().map(|c| sig.scale(&c)).collect(),
                Generator::Additive(w) => {
                    frob(w).into_iter().enumerate().map(|(j, c)| if j == 0 { sig.clone() } else { SigmaPoly::from_ratfunc(c, s) }).collect()
                }
            };
            theta_sigma_inv.push(sinv(&ser).expect("σ is a unit"));
            theta_sigma.push(ser);
        }
        let mut ring =
            ThetaRing { p, depth, gens, theta_sigma, theta_sigma_inv, theta_basis: vec![], sigma_cache: RefCell::new(HashMap::new()) };
        let gen_series: Vec<Vec<RElem>> = (0..s).map(|i| ring.theta_generator(i)).collect();
        let mut basis = vec![];
        for idx in 0..ring.dim() {
            let e = ring.exponents(idx);
            let mut acc: Vec<RElem> = vec![ring.one()];
            acc.extend((1..k).map(|_| ring.zero()));
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    acc = ring.series_mul(&acc, &gen_series[i]);
                }
            }
            basis.push(acc);
        }
        ring.theta_basis = basis;
        Ok(ring)
    }

    /// Example ii: u_i(T) = θ(P_i)/P_i with P_i = Π_m (1 + t^{a_m p^(m-1)}),
    /// zero digits skipped.  The product formula is cross-checked against
    /// the series generated from the p-power coefficients alone.
    pub fn mupmup(p: u32, digits: &[Vec<u32>], depth: u32) -> Result<Self, GaloisError> {
        let k = (p as usize).pow(depth);
        let mut gens = vec![];
        for a in digits {
            let pm = poly_product(p, a, depth);
            let th = pm.hasse_series(k - 1);
            let inv = pm.try_inverse().ok_or_else(|| GaloisError::Parameter("degenerate product".into()))?;
            let u: Vec<RatFunc> = th.iter().map(|x| x.mul(&inv)).collect();
            let c: Vec<RatFunc> = (0..depth).map(|l| u[(p as usize).pow(l)].clone()).collect();
            let from_ide = Generator::diagonal_from_ide(p, depth, &c)?;
            if from_ide.series() != u.as_slice() {
                return Err(GaloisError::IterativityFailure("product formula disagrees with the digit formula".into()));
            }
            gens.push(Generator::Diagonal(u));
        }
        ThetaRing::new(p, depth, gens)
    }

    /// Example iii: θ^(p^l)(r_i) = a_{l+1}, so w_i(T) = Σ_m a_m T^(p^(m-1)).
    pub fn alpalp(p: u32, digits: &[Vec<u32>], depth: u32) -> Result<Self, GaloisError> {
        let mut gens = vec![];
        for a in digits {
            let c: Vec<RatFunc> = (0..depth as usize).map(|l| RatFunc::from_int(&p, a.get(l).copied().unwrap_or(0) as i64)).collect();
            gens.push(Generator::additive_from_ide(p, depth, &c)?);
        }
        ThetaRing::new(p, depth, gens)
    }

    /// R = F.
    pub fn trivial(p: u32, depth: u32) -> Result<Self, GaloisError> {
        ThetaRing::new(p, depth, vec![])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Series length p^L.
    pub fn series_len(&self) -> usize {
        (self.p as usize).pow(self.depth)
    }

    pub fn nvars(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        (self.p as usize).pow(self.gens.len() as u32)
    }

    pub fn ctx(&self) -> (u32, usize) {
        (self.p, self.gens.len())
    }

    pub fn exponents(&self, idx: usize) -> Vec<u32> {
        let p = self.p as usize;
        (0..self.nvars()).map(|i| (idx / p.pow(i as u32) % p) as u32).collect()
    }

    pub fn index(&self, e: &[u32]) -> usize {
        e.iter().enumerate().map(|(i, &x)| x as usize * (self.p as usize).pow(i as u32)).sum()
    }

    pub fn zero(&self) -> RElem {
        vec![SigmaPoly::zero(&self.ctx()); self.dim()]
    }

    pub fn one(&self) -> RElem {
        self.basis(0)
    }

    pub fn basis(&self, idx: usize) -> RElem {
        let mut v = self.zero();
        v[idx] = SigmaPoly::one(&self.ctx());
        v
    }

    pub fn scalar(&self, c: SigmaPoly) -> RElem {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// r^a r^b = σ^carry r^(a+b mod p).
    pub fn basis_mul(&self, a: usize, b: usize) -> (usize, Vec<i32>) {
        let (ea, eb) = (self.exponents(a), self.exponents(b));
        let mut e = vec![];
        let mut carry = vec![];
        for (x, y) in ea.iter().zip(&eb) {
            let sum = x + y;
            e.push(sum % self.p);
            carry.push((sum / self.p) as i32);
        }
        (self.index(&e), carry)
    }

    pub fn mul(&self, x: &RElem, y: &RElem) -> RElem {
        let mut out = self.zero();
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (idx, carry) = self.basis_mul(a, b);
                out[idx] = out[idx].add(&xa.mul(yb).shift(&carry));
            }
        }
        out
    }

    pub fn add(&self, x: &RElem, y: &RElem) -> RElem {
        x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
    }

    pub fn sub(&self, x: &RElem, y: &RElem) -> RElem {
        x.iter().zip(y).map(|(a, b)| a.sub(b)).collect()
    }

    pub fn scale(&self, c: &SigmaPoly, x: &RElem) -> RElem {
        x.iter().map(|a| c.mul(a)).collect()
    }

    pub fn pow(&self, x: &RElem, e: usize) -> RElem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    pub fn is_zero(&self, x: &RElem) -> bool {
        x.iter().all(|c| c.is_zero())
    }

    fn series_mul(&self, a: &[RElem], b: &[RElem]) -> Vec<RElem> {
        let k = self.series_len();
        (0..k)
            .map(|n| {
                (0..=n).fold(self.zero(), |acc, i| {
                    if self.is_zero(&a[i]) || self.is_zero(&b[n - i]) {
                        acc
                    } else {
                        self.add(&acc, &self.mul(&a[i], &b[n - i]))
                    }
                })
            })
            .collect()
    }

    fn theta_generator(&self, i: usize) -> Vec<RElem> {
        let ri = self.index(&(0..self.nvars()).map(|j| u32::from(j == i)).collect::<Vec<_>>());
        let s = self.nvars();
        match &self.gens[i] {
            Generator::Diagonal(u) => u
                .iter()
                .map(|c| {
                    let mut v = self.zero();
                    v[ri] = SigmaPoly::from_ratfunc(c.clone(), s);
                    v
                })
                .collect(),
            Generator::Additive(w) => w
                .iter()
                .enumerate()
                .map(|(k, c)| if k == 0 { self.basis(ri) } else { self.scalar(SigmaPoly::from_ratfunc(c.clone(), s)) })
                .collect(),
        }
    }

    /// θ(r_i) as a series, i < s.
    pub fn theta_of_generator(&self, i: usize) -> Vec<RElem> {
        self.theta_generator(i)
    }

    /// θ(σ^m) for m ∈ Z^s.
    pub fn theta_sigma_power(&self, m: &[i32]) -> Rc<Vec<SigmaPoly>> {
        if let Some(v) = self.sigma_cache.borrow().get(m) {
            return v.clone();
        }
        let k = self.series_len();
        let mut acc = vec![SigmaPoly::one(&self.ctx())];
        acc.extend((1..k).map(|_| SigmaPoly::zero(&self.ctx())));
        for (i, &e) in m.iter().enumerate() {
            let base = if e >= 0 { &self.theta_sigma[i] } else { &self.theta_sigma_inv[i] };
            for _ in 0..e.unsigned_abs() {
                acc = smul(&acc, base, k);
            }
        }
        let rc = Rc::new(acc);
        self.sigma_cache.borrow_mut().insert(m.to_vec(), rc.clone());
        rc
    }

    /// θ of a coefficient in F.
    pub fn theta_coeff(&self, c: &SigmaPoly) -> Vec<SigmaPoly> {
        let k = self.series_len();
        let mut out = vec![SigmaPoly::zero(&self.ctx()); k];
        for (m, g) in c.terms() {
            let hs = g.hasse_series(k - 1);
            let sp = self.theta_sigma_power(m);
            for (a, h) in hs.iter().enumerate().filter(|(_, h)| !h.is_zero()) {
                for b in 0..k - a {
                    if !sp[b].is_zero() {
                        out[a + b] = out[a + b].add(&sp[b].scale(h));
                    }
                }
            }
        }
        out
    }

    /// θ(r^e) for a basis index.
    pub fn theta_basis(&self, idx: usize) -> &[RElem] {
        &self.theta_basis[idx]
    }

    pub fn theta(&self, x: &RElem) -> Vec<RElem> {
        let k = self.series_len();
        let mut out = vec![self.zero(); k];
        for (e, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let tc = self.theta_coeff(c);
            let tb = &self.theta_basis[e];
            for (a, ca) in tc.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for b in 0..k - a {
                    if !self.is_zero(&tb[b]) {
                        out[a + b] = self.add(&out[a + b], &self.scale(ca, &tb[b]));
                    }
                }
            }
        }
        out
    }

    /// θ(r_i)^p = θ(σ_i), exactly.
    pub fn check_relations(&self) -> Result<(), GaloisError> {
        for i in 0..self.nvars() {
            let g = self.theta_generator(i);
            let mut acc: Vec<RElem> = vec![self.one()];
            acc.extend((1..self.series_len()).map(|_| self.zero()));
            for _ in 0..self.p {
                acc = self.series_mul(&acc, &g);
            }
            let expect: Vec<RElem> = self.theta_sigma[i].iter().map(|c| self.scalar(c.clone())).collect();
            if acc != expect {
                return Err(GaloisError::IllDefined(format!("θ(r_{})^p differs from θ(σ_{})", i + 1, i + 1)));
            }
        }
        Ok(())
    }

    /// θ^(i)∘θ^(j) = C(i+j, i) θ^(i+j) for i+j < p^L on t, σ_i^±1 and the
    /// monomials r^e.  Returns the first failure.
    pub fn iterativity(&self) -> Option<String> {
        let s = self.nvars();
        let ctx = self.ctx();
        let mut spanning: Vec<(String, RElem)> = vec![("t".into(), self.scalar(SigmaPoly::from_ratfunc(RatFunc::t(self.p), s)))];
        for i in 0..s {
            let sig = SigmaPoly::sigma(self.p, s, i);
            spanning.push((format!("s{}", i + 1), self.scalar(sig.clone())));
            spanning.push((format!("s{}^-1", i + 1), self.scalar(sig.try_inverse().expect("unit"))));
        }
        for idx in 1..self.dim() {
            spanning.push((self.render(&self.basis(idx)), self.basis(idx)));
        }
        let k = self.series_len();
        for (name, x) in spanning {
            let tx = self.theta(&x);
            for (j, txj) in tx.iter().enumerate().skip(1) {
                let ttx = self.theta(txj);
                for i in 1..k - j {
                    let c = binomial_in::<SigmaPoly>(&ctx, (i + j) as u64, i as u64);
                    if ttx[i] != self.scale(&c, &tx[i + j]) {
                        return Some(format!("iteration rule fails on {name} at (i,j)=({i},{j})"));
                    }
                }
            }
        }
        None
    }

    pub fn render(&self, x: &RElem) -> String {
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| {
                let mono: Vec<String> = self
                    .exponents(idx)
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("r{}", i + 1) } else { format!("r{}^{e}", i + 1) })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("({c})*{}", mono.join("*")),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// P = Π_{m ≥ 1, a_m ≠ 0, p^(m-1) < p^L} (1 + t^{a_m p^(m-1)}).
fn poly_product(p: u32, a: &[u32], depth: u32) -> RatFunc {
    let one = RatFunc::one(&p);
    a.iter()
        .enumerate()
        .take(depth as usize)
        .filter(|(_, &d)| d % p != 0)
        .fold(one.clone(), |acc, (m, &d)| acc.mul(&one.add(&RatFunc::t(p).pow(d as u64 * (p as u64).pow(m as u32)))))
}
