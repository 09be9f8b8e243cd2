//! Finite commutative Hopf algebras over F_p, stored as structure tables.

use crate::algebra::{Fp, Ring};

use super::linalg::{self, FpVec};
use super::GaloisError;

#[derive(Clone, Debug, PartialEq)]
pub struct HopfAlgebra {
    p: u32,
    labels: Vec<String>,
    /// mult[i * dim + j] = e_i e_j
    mult: Vec<FpVec>,
    unit: FpVec,
    /// comult[i] in A ⊗ A, index a * dim + b
    comult: Vec<FpVec>,
    counit: FpVec,
    antipode: Vec<FpVec>,
}

impl HopfAlgebra {
    /// Builds from tables and checks every Hopf algebra axiom.
    pub fn from_tables(
        p: u32,
        labels: Vec<String>,
        mult: Vec<FpVec>,
        unit: FpVec,
        comult: Vec<FpVec>,
        counit: FpVec,
        antipode: Vec<FpVec>,
    ) -> Result<Self, GaloisError> {
        let h = HopfAlgebra { p, labels, mult, unit, comult, counit, antipode };
        h.check_axioms()?;
        Ok(h)
    }

    /// K[μ_k]: basis x^i, Δx = x ⊗ x.
    pub fn mu(p: u32, k: usize) -> Self {
        let fp = |v: i64| Fp::new(v, p);
        let labels = (0..k).map(|i| format!("x^{i}")).collect();
        let mut mult = vec![];
        for i in 0..k {
            for j in 0..k {
                mult.push(linalg::unit(k, (i + j) % k, p));
            }
        }
        let comult = (0..k).map(|i| linalg::unit(k * k, i * k + i, p)).collect();
        let counit = vec![fp(1); k];
        let antipode = (0..k).map(|i| linalg::unit(k, (k - i) % k, p)).collect();
        HopfAlgebra { p, labels, mult, unit: linalg::unit(k, 0, p), comult, counit, antipode }
    }

    /// K[α_p]: basis y^i with y^p = 0, y primitive.
    pub fn alpha(p: u32) -> Self {
        let k = p as usize;
        let labels = (0..k).map(|i| format!("y^{i}")).collect();
        let mut mult = vec![];
        for i in 0..k {
            for j in 0..k {
                mult.push(if i + j < k { linalg::unit(k, i + j, p) } else { linalg::zeros(k, p) });
            }
        }
        let comult = (0..k)
            .map(|i| {
                let mut v = linalg::zeros(k * k, p);
                for j in 0..=i {
                    v[j * k + (i - j)] = super::super::idmod::binom(i as u64, j as u64, p);
                }
                v
            })
            .collect();
        let counit = linalg::unit(k, 0, p);
        let antipode = (0..k)
            .map(|i| {
                let mut v = linalg::zeros(k, p);
                v[i] = Fp::new(if i % 2 == 0 { 1 } else { -1 }, p);
                v
            })
            .collect();
        HopfAlgebra { p, labels, mult, unit: linalg::unit(k, 0, p), comult, counit, antipode }
    }

    /// Tensor product; the basis is e_i ⊗ f_j at index i * dim(other) + j.
    pub fn tensor(&self, other: &HopfAlgebra) -> HopfAlgebra {
        let (d1, d2) = (self.dim(), other.dim());
        let d = d1 * d2;
        let p = self.p;
        let pair = |x: &[Fp], y: &[Fp]| -> FpVec {
            let mut v = linalg::zeros(d, p);
            for (i, a) in x.iter().enumerate() {
                for (j, b) in y.iter().enumerate() {
                    v[i * d2 + j] = a.mul(b);
                }
            }
            v
        };
        let labels = (0..d).map(|i| format!("{}*{}", self.labels[i / d2], other.labels[i % d2])).collect();
        let mut mult = vec![];
        for i in 0..d {
            for j in 0..d {
                mult.push(pair(&self.mult[(i / d2) * d1 + j / d2], &other.mult[(i % d2) * d2 + j % d2]));
            }
        }
        // Δ(e ⊗ f) = Σ (e' ⊗ f') ⊗ (e'' ⊗ f'')
        let comult = (0..d)
            .map(|i| {
                let (c1, c2) = (&self.comult[i / d2], &other.comult[i % d2]);
                let mut v = linalg::zeros(d * d, p);
                for (ab, x) in c1.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (cd, y) in c2.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        let (a, b, c, e) = (ab / d1, ab % d1, cd / d2, cd % d2);
                        let idx = (a * d2 + c) * d + b * d2 + e;
                        v[idx] = v[idx].add(&x.mul(y));
                    }
                }
                v
            })
            .collect();
        let counit = (0..d).map(|i| self.counit[i / d2].mul(&other.counit[i % d2])).collect();
        let antipode = (0..d).map(|i| pair(&self.antipode[i / d2], &other.antipode[i % d2])).collect();
        HopfAlgebra { p, labels, mult, unit: pair(&self.unit, &other.unit), comult, counit, antipode }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &FpVec {
        &self.unit
    }

    pub fn basis_mul(&self, i: usize, j: usize) -> &FpVec {
        &self.mult[i * self.dim() + j]
    }

    pub fn mul(&self, x: &[Fp], y: &[Fp]) -> FpVec {
        let d = self.dim();
        let mut out = linalg::zeros(d, self.p);
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                linalg::axpy(&mut out, a.mul(b), &self.mult[i * d + j]);
            }
        }
        out
    }

    pub fn pow(&self, x: &[Fp], e: usize) -> FpVec {
        (0..e).fold(self.unit.clone(), |acc, _| self.mul(&acc, x))
    }

    pub fn comul(&self, x: &[Fp]) -> FpVec {
        let mut out = linalg::zeros(self.dim() * self.dim(), self.p);
        for (i, a) in x.iter().enumerate() {
            linalg::axpy(&mut out, *a, &self.comult[i]);
        }
        out
    }

    pub fn basis_comul(&self, i: usize) -> &FpVec {
        &self.comult[i]
    }

    pub fn counit(&self, x: &[Fp]) -> Fp {
        x.iter().zip(&self.counit).fold(Fp::new(0, self.p), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    pub fn antipode(&self, x: &[Fp]) -> FpVec {
        let mut out = linalg::zeros(self.dim(), self.p);
        for (i, a) in x.iter().enumerate() {
            linalg::axpy(&mut out, *a, &self.antipode[i]);
        }
        out
    }

    /// Product in A ⊗ A.
    pub fn mul2(&self, x: &[Fp], y: &[Fp]) -> FpVec {
        let d = self.dim();
        let mut out = linalg::zeros(d * d, self.p);
        for (ab, u) in x.iter().enumerate().filter(|(_, u)| !u.is_zero()) {
            for (ce, v) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let left = self.basis_mul(ab / d, ce / d);
                let right = self.basis_mul(ab % d, ce % d);
                let c = u.mul(v);
                for (i, l) in left.iter().enumerate().filter(|(_, l)| !l.is_zero()) {
                    for (j, r) in right.iter().enumerate().filter(|(_, r)| !r.is_zero()) {
                        out[i * d + j] = out[i * d + j].add(&c.mul(&l.mul(r)));
                    }
                }
            }
        }
        out
    }

    /// (Δ ⊗ id) or (id ⊗ Δ) applied to an element of A ⊗ A.
    fn comul_side(&self, x: &[Fp], left: bool) -> FpVec {
        let d = self.dim();
        let mut out = linalg::zeros(d * d * d, self.p);
        for (ab, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (a, b) = (ab / d, ab % d);
            let split = if left { &self.comult[a] } else { &self.comult[b] };
            for (uv, s) in split.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                let (u, v) = (uv / d, uv % d);
                let idx = if left { (u * d + v) * d + b } else { (a * d + u) * d + v };
                out[idx] = out[idx].add(&c.mul(s));
            }
        }
        out
    }

    fn check_axioms(&self) -> Result<(), GaloisError> {
        let d = self.dim();
        let p = self.p;
        let fail = |what: &str| Err(GaloisError::HopfAxiom(what.to_string()));
        let shapes = self.mult.len() == d * d
            && self.mult.iter().all(|v| v.len() == d)
            && self.unit.len() == d
            && self.comult.len() == d
            && self.comult.iter().all(|v| v.len() == d * d)
            && self.counit.len() == d
            && self.antipode.len() == d
            && self.antipode.iter().all(|v| v.len() == d);
        if !shapes {
            return fail("table shapes");
        }
        let e = |i: usize| linalg::unit(d, i, p);
        for i in 0..d {
            if self.mul(&self.unit, &e(i)) != e(i) {
                return fail("unit");
            }
            for j in 0..d {
                if self.basis_mul(i, j) != self.basis_mul(j, i) {
                    return fail("commutativity");
                }
                for k in 0..d {
                    if self.mul(self.basis_mul(i, j), &e(k)) != self.mul(&e(i), self.basis_mul(j, k)) {
                        return fail("associativity");
                    }
                }
                if self.comul(self.basis_mul(i, j)) != self.mul2(&self.comult[i], &self.comult[j]) {
                    return fail("comultiplication is not multiplicative");
                }
                if self.counit(self.basis_mul(i, j)) != self.counit[i].mul(&self.counit[j]) {
                    return fail("counit is not multiplicative");
                }
            }
            let c = &self.comult[i];
            if self.comul_side(c, true) != self.comul_side(c, false) {
                return fail("coassociativity");
            }
            let mut left = linalg::zeros(d, p);
            let mut right = linalg::zeros(d, p);
            let mut sl = linalg::zeros(d, p);
            let mut sr = linalg::zeros(d, p);
            for (ab, x) in c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (a, b) = (ab / d, ab % d);
                linalg::axpy(&mut left, x.mul(&self.counit[a]), &e(b));
                linalg::axpy(&mut right, x.mul(&self.counit[b]), &e(a));
                linalg::axpy(&mut sl, *x, &self.mul(&self.antipode[a], &e(b)));
                linalg::axpy(&mut sr, *x, &self.mul(&e(a), &self.antipode[b]));
            }
            if left != e(i) || right != e(i) {
                return fail("counit");
            }
            let eps: FpVec = self.unit.iter().map(|u| u.mul(&self.counit[i])).collect();
            if sl != eps || sr != eps {
                return fail("antipode");
            }
        }
        if self.counit(&self.unit) != Fp::new(1, p) {
            return fail("counit of unit");
        }
        Ok(())
    }

    /// The ideal generated by `gens`, as an echelon basis.
    pub fn ideal(&self, gens: &[FpVec]) -> Ideal {
        let d = self.dim();
        let mut rows = vec![];
        for g in gens {
            for i in 0..d {
                rows.push(self.mul(g, &linalg::unit(d, i, self.p)));
            }
        }
        Ideal { basis: linalg::basis(&rows), dim: d, p: self.p }
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal { basis: vec![], dim: self.dim(), p: self.p }
    }

    /// Ker ε, the ideal of the trivial subgroup.
    pub fn augmentation_ideal(&self) -> Ideal {
        let gens: Vec<FpVec> = (0..self.dim())
            .map(|i| {
                let mut v = linalg::unit(self.dim(), i, self.p);
                linalg::axpy(&mut v, self.counit[i].neg(), &self.unit);
                v
            })
            .collect();
        self.ideal(&gens)
    }

    /// Every ideal, found as sums of principal ideals.
    pub fn all_ideals(&self) -> Vec<Ideal> {
        let mut found: Vec<Ideal> = vec![self.zero_ideal()];
        for v in linalg::all_vectors(self.dim(), self.p) {
            let i = self.ideal(&[v]);
            if !found.contains(&i) {
                found.push(i);
            }
        }
        let mut grew = true;
        while grew {
            grew = false;
            let snapshot = found.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let mut gens = a.basis.clone();
                    gens.extend(b.basis.iter().cloned());
                    let s = self.ideal(&gens);
                    if !found.contains(&s) {
                        found.push(s);
                        grew = true;
                    }
                }
            }
        }
        found.sort_by_key(|i| i.dimension());
        found
    }

    /// Δ(I) ⊆ I ⊗ A + A ⊗ I, ε(I) = 0 and S(I) ⊆ I.
    pub fn is_hopf_ideal(&self, i: &Ideal) -> bool {
        let d = self.dim();
        let mut span = vec![];
        for v in &i.basis {
            for b in 0..d {
                let mut l = linalg::zeros(d * d, self.p);
                let mut r = linalg::zeros(d * d, self.p);
                for (a, x) in v.iter().enumerate() {
                    l[a * d + b] = *x;
                    r[b * d + a] = *x;
                }
                span.push(l);
                span.push(r);
            }
        }
        i.basis.iter().all(|v| self.counit(v).is_zero() && i.contains(&self.antipode(v)) && linalg::in_span(&span, &self.comul(v)))
    }

    /// K[G/H] for H cut out by a Hopf ideal I: the f with
    /// Δ(f) - f ⊗ 1 ∈ A ⊗ I.
    pub fn quotient_invariants(&self, i: &Ideal) -> Vec<FpVec> {
        let d = self.dim();
        let ann = i.annihilator();
        let cols: Vec<FpVec> = (0..d)
            .map(|j| {
                let mut c = self.comult[j].clone();
                for (b, u) in self.unit.iter().enumerate() {
                    c[j * d + b] = c[j * d + b].sub(u);
                }
                let mut out = vec![];
                for a in 0..d {
                    for phi in &ann {
                        out.push((0..d).fold(Fp::new(0, self.p), |acc, b| acc.add(&phi[b].mul(&c[a * d + b]))));
                    }
                }
                out
            })
            .collect();
        linalg::basis(&linalg::kernel_of_columns(&cols, self.p))
    }

    /// Reduced iff the Frobenius x ↦ x^p, which is F_p-linear, is injective.
    pub fn nilpotent_witness(&self) -> Option<FpVec> {
        let d = self.dim();
        let cols: Vec<FpVec> = (0..d).map(|i| self.pow(&linalg::unit(d, i, self.p), self.p as usize)).collect();
        linalg::kernel_of_columns(&cols, self.p).into_iter().next()
    }

    pub fn is_reduced(&self) -> bool {
        self.nilpotent_witness().is_none()
    }

    pub fn render(&self, x: &[Fp]) -> String {
        let parts: Vec<String> = x
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| if c.is_one() { l.clone() } else { format!("{c}*{l}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// An ideal of a finite F_p-algebra, kept as an echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    basis: Vec<FpVec>,
    dim: usize,
    p: u32,
}

impl Ideal {
    pub fn basis(&self) -> &[FpVec] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn codimension(&self) -> usize {
        self.dim - self.basis.len()
    }

    pub fn contains(&self, v: &[Fp]) -> bool {
        linalg::in_span(&self.basis, v)
    }

    /// Functionals vanishing on the ideal; x ∈ I iff all of them vanish on x.
    pub fn annihilator(&self) -> Vec<FpVec> {
        linalg::annihilator(&self.basis, self.dim, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_satisfy_axioms() {
        for p in [2, 3, 5] {
            for h in [HopfAlgebra::mu(p, p as usize), HopfAlgebra::mu(p, 4), HopfAlgebra::alpha(p)] {
                h.check_axioms().unwrap();
            }
        }
        let prod = HopfAlgebra::mu(2, 2).tensor(&HopfAlgebra::alpha(2));
        prod.check_axioms().unwrap();
        assert_eq!(prod.dim(), 4);
    }

    #[test]
    fn broken_tables_are_rejected() {
        let h = HopfAlgebra::mu(3, 3);
        let mut counit = h.counit.clone();
        counit[1] = Fp::new(2, 3);
        let r = HopfAlgebra::from_tables(3, h.labels.clone(), h.mult.clone(), h.unit.clone(), h.comult.clone(), counit, h.antipode.clone());
        assert!(matches!(r, Err(GaloisError::HopfAxiom(_))));
    }

    #[test]
    fn reducedness_of_group_algebras() {
        // μ_k with p ∤ k is étale; μ_p and α_p are infinitesimal
        assert!(HopfAlgebra::mu(3, 2).is_reduced());
        assert!(HopfAlgebra::mu(2, 3).is_reduced());
        assert!(!HopfAlgebra::mu(2, 2).is_reduced());
        assert!(!HopfAlgebra::alpha(3).is_reduced());
    }

    #[test]
    fn ideals_of_mu_p() {
        // K[x]/(x^p - 1) = K[z]/z^p is local with ideals (z^j)
        for p in [2, 3] {
            let h = HopfAlgebra::mu(p, p as usize);
            let ideals = h.all_ideals();
            assert_eq!(ideals.len(), p as usize + 1);
            assert!(ideals.iter().all(|i| h.is_hopf_ideal(i) == (i.dimension() == 0 || i.codimension() == 1)));
        }
    }

    #[test]
    fn quotient_invariants_of_product() {
        let p = 2;
        let g = HopfAlgebra::mu(p, 2).tensor(&HopfAlgebra::mu(p, 2));
        // x1 - 1 cuts out H = 1 × μ_2; invariants are functions of x1 alone
        let mut gen = linalg::zeros(4, p);
        gen[2] = Fp::new(1, p);
        gen[0] = Fp::new(-1, p);
        let i = g.ideal(&[gen]);
        assert!(g.is_hopf_ideal(&i));
        let inv = g.quotient_invariants(&i);
        assert_eq!(inv.len(), 2);
        assert_eq!(g.quotient_invariants(&g.zero_ideal()).len(), 1);
        assert_eq!(g.quotient_invariants(&g.augmentation_ideal()).len(), 4);
    }
}
