//! Coactions R → R ⊗_K K[G], the torsor map γ and the checks built on it.
//!
//! Elements of R ⊗_F R are coordinate vectors over r^a ⊗ r^b (index a·d + b),
//! elements of R ⊗_K A over r^a ⊗ h_j (index a·dim A + j).

use crate::algebra::{Fp, Ring};

use super::hopf::{HopfAlgebra, Ideal};
use super::linalg::{self, FpVec};
use super::ring::{RElem, ThetaRing};
use super::sigma::{self, SigmaPoly};
use super::GaloisError;

pub type R2Elem = Vec<SigmaPoly>;
pub type RAElem = Vec<SigmaPoly>;

/// A^{⊗s}, with the monomial Π x_i^{e_i} at index Σ e_i k^(s-1-i).
pub fn hopf_power(base: &HopfAlgebra, s: usize) -> HopfAlgebra {
    match s {
        0 => HopfAlgebra::mu(base.p(), 1),
        _ => (1..s).fold(base.clone(), |acc, _| acc.tensor(base)),
    }
}

fn monomial_index(k: usize, e: &[u32]) -> usize {
    e.iter().fold(0, |acc, &x| acc * k + x as usize)
}

/// Operations on R ⊗_K A for a fixed finite Hopf algebra A.
pub struct Tensor<'a> {
    pub ring: &'a ThetaRing,
    pub hopf: &'a HopfAlgebra,
}

impl Tensor<'_> {
    fn h(&self) -> usize {
        self.hopf.dim()
    }

    pub fn zero(&self) -> RAElem {
        vec![SigmaPoly::zero(&self.ring.ctx()); self.ring.dim() * self.h()]
    }

    /// r ⊗ a.
    pub fn pure(&self, r: &RElem, a: &[Fp]) -> RAElem {
        let h = self.h();
        let s = self.ring.nvars();
        let mut out = self.zero();
        for (e, c) in r.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                out[e * h + j] = c.mul(&SigmaPoly::from_fp(*x, s));
            }
        }
        out
    }

    pub fn mul(&self, x: &RAElem, y: &RAElem) -> RAElem {
        let h = self.h();
        let s = self.ring.nvars();
        let mut out = self.zero();
        for (ai, c1) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (bj, c2) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (idx, carry) = self.ring.basis_mul(ai / h, bj / h);
                let c = c1.mul(c2).shift(&carry);
                for (j, v) in self.hopf.basis_mul(ai % h, bj % h).iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    out[idx * h + j] = out[idx * h + j].add(&c.mul(&SigmaPoly::from_fp(*v, s)));
                }
            }
        }
        out
    }

    /// (θ ⊗ id) as a series.
    pub fn theta(&self, x: &RAElem) -> Vec<RAElem> {
        let h = self.h();
        let k = self.ring.series_len();
        let mut out = vec![self.zero(); k];
        for j in 0..h {
            let col: RElem = (0..self.ring.dim()).map(|e| x[e * h + j].clone()).collect();
            if self.ring.is_zero(&col) {
                continue;
            }
            for (n, tc) in self.ring.theta(&col).into_iter().enumerate() {
                for (e, c) in tc.into_iter().enumerate() {
                    out[n][e * h + j] = c;
                }
            }
        }
        out
    }

    /// (id ⊗ φ)(x) for a functional φ on A.
    pub fn contract(&self, x: &RAElem, phi: &[Fp]) -> RElem {
        let h = self.h();
        let s = self.ring.nvars();
        (0..self.ring.dim())
            .map(|e| {
                (0..h).fold(SigmaPoly::zero(&self.ring.ctx()), |acc, j| {
                    if phi[j].is_zero() {
                        acc
                    } else {
                        acc.add(&x[e * h + j].mul(&SigmaPoly::from_fp(phi[j], s)))
                    }
                })
            })
            .collect()
    }

    /// x ∈ R ⊗ I.
    pub fn in_ideal(&self, x: &RAElem, ideal: &Ideal) -> bool {
        ideal.annihilator().iter().all(|phi| self.ring.is_zero(&self.contract(x, phi)))
    }
}

/// ρ: R → R ⊗_K A, stored on the monomial basis.
#[derive(Clone, Debug)]
pub struct Coaction {
    hopf: HopfAlgebra,
    images: Vec<RAElem>,
}

impl Coaction {
    /// Extends generator images multiplicatively and verifies that ρ is a
    /// well-defined algebra map, both comodule axioms and θ-equivariance.
    pub fn new(ring: &ThetaRing, hopf: HopfAlgebra, gen_images: Vec<RAElem>) -> Result<Self, GaloisError> {
        if hopf.p() != ring.p() || gen_images.len() != ring.nvars() {
            return Err(GaloisError::Parameter("coaction data does not match the ring".into()));
        }
        let t = Tensor { ring, hopf: &hopf };
        let h = hopf.dim();
        let one = t.pure(&ring.one(), hopf.unit());
        let mut images = vec![];
        for idx in 0..ring.dim() {
            let e = ring.exponents(idx);
            let mut acc = one.clone();
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    acc = t.mul(&acc, &gen_images[i]);
                }
            }
            images.push(acc);
        }
        for (i, g) in gen_images.iter().enumerate() {
            let pow = (0..ring.p()).fold(one.clone(), |acc, _| t.mul(&acc, g));
            let sigma = t.pure(&ring.scalar(SigmaPoly::sigma(ring.p(), ring.nvars(), i)), hopf.unit());
            if pow != sigma {
                return Err(GaloisError::NotComodule(format!("ρ(r_{})^p ≠ σ_{} ⊗ 1", i + 1, i + 1)));
            }
        }
        let c = Coaction { hopf, images };
        let t = Tensor { ring, hopf: &c.hopf };
        for idx in 0..ring.dim() {
            let img = &c.images[idx];
            // (ρ ⊗ id)ρ = (id ⊗ Δ)ρ in R ⊗ A ⊗ A
            let mut lhs = vec![SigmaPoly::zero(&ring.ctx()); ring.dim() * h * h];
            let mut rhs = lhs.clone();
            for (aj, coef) in img.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let (a, j) = (aj / h, aj % h);
                for (bi, v) in c.images[a].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    let slot = bi * h + j;
                    lhs[slot] = lhs[slot].add(&coef.mul(v));
                }
                for (uv, d) in c.hopf.basis_comul(j).iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    let slot = a * h * h + uv;
                    rhs[slot] = rhs[slot].add(&coef.mul(&SigmaPoly::from_fp(*d, ring.nvars())));
                }
            }
            if lhs != rhs {
                return Err(GaloisError::NotComodule(format!("coassociativity fails on {}", ring.render(&ring.basis(idx)))));
            }
            let eps: Vec<Fp> = (0..h).map(|j| c.hopf.counit(&linalg::unit(h, j, ring.p()))).collect();
            if t.contract(img, &eps) != ring.basis(idx) {
                return Err(GaloisError::NotComodule(format!("counit fails on {}", ring.render(&ring.basis(idx)))));
            }
            let lhs: Vec<RAElem> = ring.theta_basis(idx).iter().map(|x| c.apply(ring, x)).collect();
            if lhs != t.theta(img) {
                return Err(GaloisError::NotEquivariant(format!("ρ∘θ ≠ (θ⊗id)∘ρ on {}", ring.render(&ring.basis(idx)))));
            }
        }
        Ok(c)
    }

    /// ρ(r_i) = r_i ⊗ x_i into K[μ_p^s].
    pub fn diagonal(ring: &ThetaRing) -> Result<Self, GaloisError> {
        let p = ring.p();
        let s = ring.nvars();
        let hopf = hopf_power(&HopfAlgebra::mu(p, p as usize), s);
        let t = Tensor { ring, hopf: &hopf };
        let imgs = (0..s)
            .map(|i| {
                let e: Vec<u32> = (0..s).map(|j| u32::from(i == j)).collect();
                t.pure(&ring.basis(ring.index(&e)), &linalg::unit(hopf.dim(), monomial_index(p as usize, &e), p))
            })
            .collect();
        Coaction::new(ring, hopf, imgs)
    }

    /// ρ(r_i) = r_i ⊗ 1 + 1 ⊗ y_i into K[α_p^s].
    pub fn additive(ring: &ThetaRing) -> Result<Self, GaloisError> {
        let p = ring.p();
        let s = ring.nvars();
        let hopf = hopf_power(&HopfAlgebra::alpha(p), s);
        let t = Tensor { ring, hopf: &hopf };
        let imgs = (0..s)
            .map(|i| {
                let e: Vec<u32> = (0..s).map(|j| u32::from(i == j)).collect();
                let a = t.pure(&ring.basis(ring.index(&e)), hopf.unit());
                let b = t.pure(&ring.one(), &linalg::unit(hopf.dim(), monomial_index(p as usize, &e), p));
                a.iter().zip(&b).map(|(x, y)| x.add(y)).collect()
            })
            .collect();
        Coaction::new(ring, hopf, imgs)
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn image(&self, idx: usize) -> &RAElem {
        &self.images[idx]
    }

    /// ρ on a general element, by F-linearity.
    pub fn apply(&self, ring: &ThetaRing, x: &RElem) -> RAElem {
        let mut out = vec![SigmaPoly::zero(&ring.ctx()); ring.dim() * self.hopf.dim()];
        for (e, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (o, v) in out.iter_mut().zip(&self.images[e]) {
                if !v.is_zero() {
                    *o = o.add(&c.mul(v));
                }
            }
        }
        out
    }

    /// Monomial index in A of the generator group-like/primitive of factor i.
    pub fn generator_index(&self, s: usize, i: usize) -> usize {
        let e: Vec<u32> = (0..s).map(|j| u32::from(i == j)).collect();
        monomial_index(self.hopf.p() as usize, &e)
    }
}

/// r ⊗ s in R ⊗_F R.
pub fn r2_pure(ring: &ThetaRing, r: &RElem, s: &RElem) -> R2Elem {
    let d = ring.dim();
    let mut out = vec![SigmaPoly::zero(&ring.ctx()); d * d];
    for (a, x) in r.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (b, y) in s.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out[a * d + b] = x.mul(y);
        }
    }
    out
}

pub fn r2_mul(ring: &ThetaRing, x: &R2Elem, y: &R2Elem) -> R2Elem {
    let d = ring.dim();
    let mut out = vec![SigmaPoly::zero(&ring.ctx()); d * d];
    for (ab, c1) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (ce, c2) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (i, k1) = ring.basis_mul(ab / d, ce / d);
            let (j, k2) = ring.basis_mul(ab % d, ce % d);
            let carry: Vec<i32> = k1.iter().zip(&k2).map(|(a, b)| a + b).collect();
            out[i * d + j] = out[i * d + j].add(&c1.mul(c2).shift(&carry));
        }
    }
    out
}

/// θ on R ⊗_F R: θ(c r^a ⊗ r^b) = θ(c) θ(r^a) ⊗ θ(r^b).
pub fn r2_theta(ring: &ThetaRing, x: &R2Elem) -> Vec<R2Elem> {
    let d = ring.dim();
    let k = ring.series_len();
    let zero = vec![SigmaPoly::zero(&ring.ctx()); d * d];
    let mut out = vec![zero.clone(); k];
    for (ab, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let (ta, tb) = (ring.theta_basis(ab / d), ring.theta_basis(ab % d));
        let mut basis_series = vec![zero.clone(); k];
        for i in 0..k {
            for j in 0..k - i {
                if ring.is_zero(&ta[i]) || ring.is_zero(&tb[j]) {
                    continue;
                }
                let prod = r2_pure(ring, &ta[i], &tb[j]);
                basis_series[i + j] = basis_series[i + j].iter().zip(&prod).map(|(a, b)| a.add(b)).collect();
            }
        }
        let tc = ring.theta_coeff(c);
        for (i, ci) in tc.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for j in 0..k - i {
                for (o, v) in out[i + j].iter_mut().zip(&basis_series[j]) {
                    if !v.is_zero() {
                        *o = o.add(&ci.mul(v));
                    }
                }
            }
        }
    }
    out
}

/// The torsor map γ(a ⊗ b) = (a ⊗ 1)·ρ(b), verified bijective and
/// θ-equivariant.
pub struct Torsor<'a> {
    ring: &'a ThetaRing,
    coaction: Coaction,
    rows: Vec<RAElem>,
}

pub fn build_torsor_gamma(ring: &ThetaRing, coaction: Coaction) -> Result<Torsor<'_>, GaloisError> {
    let d = ring.dim();
    let h = coaction.hopf.dim();
    if d * d != d * h {
        return Err(GaloisError::NotIso(format!("dim_F R⊗R = {} but dim_F R·dim_K K[G] = {}", d * d, d * h)));
    }
    let t = Tensor { ring, hopf: &coaction.hopf };
    let rows: Vec<RAElem> =
        (0..d * d).map(|ab| t.mul(&t.pure(&ring.basis(ab / d), coaction.hopf.unit()), coaction.image(ab % d))).collect();
    let rank = sigma::rank(&rows);
    if rank != d * d {
        return Err(GaloisError::NotIso(format!("γ has rank {rank} < {}", d * d)));
    }
    let torsor = Torsor { ring, coaction, rows };
    for ab in 0..d * d {
        let mut x = vec![SigmaPoly::zero(&ring.ctx()); d * d];
        x[ab] = SigmaPoly::one(&ring.ctx());
        let lhs: Vec<RAElem> = r2_theta(ring, &x).iter().map(|y| torsor.gamma(y)).collect();
        let rhs = torsor.tensor().theta(&torsor.rows[ab]);
        if lhs != rhs {
            return Err(GaloisError::NotEquivariant(format!("γ∘θ ≠ (θ⊗id)∘γ on basis element {ab}")));
        }
    }
    Ok(torsor)
}

/// Outcome of the torsor-under-quotient check.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientTorsor {
    pub invariant_ring_dim: usize,
    pub quotient_hopf_dim: usize,
    pub coaction_restricts: bool,
    pub quotient_is_subalgebra: bool,
    pub gamma_bijective: bool,
}

impl QuotientTorsor {
    pub fn verdict(&self) -> bool {
        self.coaction_restricts && self.quotient_is_subalgebra && self.gamma_bijective && self.invariant_ring_dim == self.quotient_hopf_dim
    }
}

/// The map I ↦ R⊗I against J ↦ J ∩ (1⊗L).
#[derive(Clone, Debug, PartialEq)]
pub struct IdealBijection {
    pub ideals_of_l: usize,
    pub generators_tried: usize,
    pub distinct_theta_ideals: usize,
    pub forward_ok: bool,
    pub backward_ok: bool,
}

impl IdealBijection {
    pub fn verdict(&self) -> bool {
        self.forward_ok && self.backward_ok && self.distinct_theta_ideals == self.ideals_of_l
    }
}

impl<'a> Torsor<'a> {
    pub fn ring(&self) -> &'a ThetaRing {
        self.ring
    }

    pub fn coaction(&self) -> &Coaction {
        &self.coaction
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.coaction.hopf
    }

    pub fn tensor(&self) -> Tensor<'_> {
        Tensor { ring: self.ring, hopf: &self.coaction.hopf }
    }

    pub fn gamma(&self, x: &R2Elem) -> RAElem {
        let mut out = self.tensor().zero();
        for (ab, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (o, v) in out.iter_mut().zip(&self.rows[ab]) {
                if !v.is_zero() {
                    *o = o.add(&c.mul(v));
                }
            }
        }
        out
    }

    /// r⊗s - s⊗r lies in the kernel of (id ⊗ π_H)∘γ.
    pub fn invariance_test(&self, r: &RElem, s: &RElem, h: &Ideal) -> bool {
        let x: R2Elem = r2_pure(self.ring, r, s).iter().zip(r2_pure(self.ring, s, r)).map(|(a, b)| a.sub(&b)).collect();
        self.tensor().in_ideal(&self.gamma(&x), h)
    }

    /// R^H = {r : ρ(r) - r ⊗ 1 ∈ R ⊗ I_H}.  The coaction has coefficients
    /// in F_p on the monomial basis, so the condition is an F_p-linear system.
    pub fn invariant_subalgebra(&self, h: &Ideal) -> Result<Vec<RElem>, GaloisError> {
        let ring = self.ring;
        let t = self.tensor();
        let unit = self.hopf().unit();
        let ann = h.annihilator();
        let mut cols: Vec<FpVec> = vec![];
        for e in 0..ring.dim() {
            let diff: RAElem = self.coaction.image(e).iter().zip(t.pure(&ring.basis(e), unit)).map(|(a, b)| a.sub(&b)).collect();
            let mut col = vec![];
            for phi in &ann {
                for c in t.contract(&diff, phi) {
                    col.push(c.as_fp().ok_or_else(|| GaloisError::Unsupported("coaction with coefficients outside F_p".into()))?);
                }
            }
            cols.push(col);
        }
        let kernel = linalg::kernel_of_columns(&cols, ring.p());
        Ok(linalg::basis(&kernel).into_iter().map(|v| v.into_iter().map(|x| SigmaPoly::from_fp(x, ring.nvars())).collect()).collect())
    }

    /// The F-span of `basis` is a θ-stable subalgebra containing 1.
    pub fn is_theta_subalgebra(&self, basis: &[RElem]) -> bool {
        let ring = self.ring;
        if !sigma::in_span(basis, &ring.one()) {
            return false;
        }
        basis
            .iter()
            .all(|x| ring.theta(x).iter().all(|y| sigma::in_span(basis, y)) && basis.iter().all(|y| sigma::in_span(basis, &ring.mul(x, y))))
    }

    /// R^H is a torsor under K[G]^H = K[G/H] for a normal H.
    pub fn quotient_torsor(&self, h: &Ideal) -> Result<QuotientTorsor, GaloisError> {
        let ring = self.ring;
        let hopf = self.hopf();
        let t = self.tensor();
        let rh = self.invariant_subalgebra(h)?;
        let ah = hopf.quotient_invariants(h);
        let quotient_is_subalgebra =
            linalg::in_span(&ah, hopf.unit()) && ah.iter().all(|x| ah.iter().all(|y| linalg::in_span(&ah, &hopf.mul(x, y))));
        let target: Vec<RAElem> = rh.iter().flat_map(|b| ah.iter().map(|a| t.pure(b, a))).collect();
        let coaction_restricts = rh.iter().all(|b| sigma::in_span(&target, &self.coaction.apply(ring, b)));
        let images: Vec<RAElem> =
            rh.iter().flat_map(|a| rh.iter().map(|b| t.mul(&t.pure(a, hopf.unit()), &self.coaction.apply(ring, b)))).collect();
        let gamma_bijective = images.len() == target.len() && sigma::rank(&images) == images.len() && sigma::same_span(&images, &target);
        Ok(QuotientTorsor {
            invariant_ring_dim: rh.len(),
            quotient_hopf_dim: ah.len(),
            coaction_restricts,
            quotient_is_subalgebra,
            gamma_bijective,
        })
    }

    /// γ sends the constants of R⊗R onto 1 ⊗ K[G]; returns the F_p-rank of
    /// the image, or None if some image is not of the form 1 ⊗ a.
    pub fn transport_constants(&self, constants: &[R2Elem]) -> Option<usize> {
        let h = self.hopf().dim();
        let mut rows = vec![];
        for c in constants {
            let img = self.gamma(c);
            if img[h..].iter().any(|x| !x.is_zero()) {
                return None;
            }
            rows.push(img[..h].iter().map(|x| x.as_fp()).collect::<Option<FpVec>>()?);
        }
        Some(linalg::rank(&rows))
    }
}

/// Constants of R ⊗_F R: the kernel of θ^(k), 0 < k < p^L, on the K-form
/// spanned by σ^m r^a ⊗ r^b with m ∈ {-1, 0}^s.
#[derive(Clone, Debug)]
pub struct ConstantsOfSquare {
    pub dim: usize,
    pub basis: Vec<R2Elem>,
}

pub fn constants_of_square(ring: &ThetaRing) -> ConstantsOfSquare {
    let d = ring.dim();
    let s = ring.nvars();
    let p = ring.p();
    let mut family: Vec<R2Elem> = vec![];
    for mask in 0..1usize << s {
        let m: Vec<i32> = (0..s).map(|i| -(((mask >> i) & 1) as i32)).collect();
        for ab in 0..d * d {
            let mut x = vec![SigmaPoly::zero(&ring.ctx()); d * d];
            x[ab] = SigmaPoly::monomial(crate::algebra::RatFunc::one(&p), m.clone());
            family.push(x);
        }
    }
    let cols: Vec<Vec<SigmaPoly>> = family.iter().map(|x| r2_theta(ring, x).into_iter().skip(1).flatten().collect()).collect();
    let kernel = linalg::fp_relations(&cols, p);
    let basis: Vec<R2Elem> = kernel
        .iter()
        .map(|v| {
            let mut acc = vec![SigmaPoly::zero(&ring.ctx()); d * d];
            for (c, x) in v.iter().zip(&family) {
                if !c.is_zero() {
                    let c = SigmaPoly::from_fp(*c, s);
                    acc = acc.iter().zip(x).map(|(a, b)| a.add(&c.mul(b))).collect();
                }
            }
            acc
        })
        .collect();
    ConstantsOfSquare { dim: basis.len(), basis }
}

/// Checks the ideal correspondence for R ⊗_K L with L a finite algebra.
///
/// Forward: for each ideal I of L, R⊗I is a θ-stable ideal meeting 1⊗L in
/// 1⊗I.  Backward: for each K-form element v (all of them, or `sample`
/// pseudo-random ones), the θ-ideal J it generates equals R⊗(J ∩ 1⊗L).
pub fn ideal_bijection(ring: &ThetaRing, l: &HopfAlgebra, sample: Option<(usize, u64)>) -> IdealBijection {
    let p = ring.p();
    let t = Tensor { ring, hopf: l };
    let h = l.dim();
    let d = ring.dim();
    let ideals = l.all_ideals();
    let l_elems: Vec<FpVec> = linalg::all_vectors(h, p).collect();
    let units: Vec<RAElem> =
        (0..d).flat_map(|e| (0..h).map(move |j| (e, j))).map(|(e, j)| t.pure(&ring.basis(e), &linalg::unit(h, j, p))).collect();

    let forward_ok = ideals.iter().all(|i| {
        let gens: Vec<RAElem> =
            (0..d).flat_map(|e| i.basis().iter().map(move |b| (e, b))).map(|(e, b)| t.pure(&ring.basis(e), b)).collect();
        let stable = gens.iter().all(|g| t.theta(g).iter().all(|x| t.in_ideal(x, i)) && units.iter().all(|u| t.in_ideal(&t.mul(u, g), i)));
        let meet: Vec<&FpVec> = l_elems.iter().filter(|a| t.in_ideal(&t.pure(&ring.one(), a), i)).collect();
        stable && meet.len() == p.pow(i.dimension() as u32) as usize && meet.iter().all(|a| i.contains(a))
    });

    let candidates: Vec<FpVec> = match sample {
        None => linalg::all_vectors(d * h, p).collect(),
        Some((n, seed)) => {
            // 1 ⊗ a for every a ∈ L, so each principal ideal is reached
            let mut rng = crate::random::rng(seed);
            let pure = l_elems.iter().map(|a| (0..d * h).map(|k| if k < h { a[k] } else { Fp::new(0, p) }).collect());
            pure.chain((0..n).map(|_| (0..d * h).map(|_| crate::random::fp(&mut rng, p)).collect())).collect()
        }
    };
    let mut found: Vec<Ideal> = vec![];
    let mut backward_ok = true;
    for v in &candidates {
        let v: RAElem = v.iter().map(|x| SigmaPoly::from_fp(*x, ring.nvars())).collect();
        let mut span: Vec<RAElem> = units.iter().map(|u| t.mul(u, &v)).collect();
        for w in t.theta(&v).into_iter().skip(1) {
            if !sigma::in_span(&span, &w) {
                span.extend(units.iter().map(|u| t.mul(u, &w)));
            }
        }
        let meet: Vec<FpVec> = l_elems.iter().filter(|a| sigma::in_span(&span, &t.pure(&ring.one(), a))).cloned().collect();
        let ideal = l.ideal(&meet);
        let ext: Vec<RAElem> =
            (0..d).flat_map(|e| ideal.basis().iter().map(move |b| (e, b))).map(|(e, b)| t.pure(&ring.basis(e), b)).collect();
        let is_ideal = meet.len() == p.pow(ideal.dimension() as u32) as usize;
        if !is_ideal || !sigma::same_span(&span, &ext) {
            backward_ok = false;
            break;
        }
        if !found.contains(&ideal) {
            found.push(ideal);
        }
    }
    IdealBijection {
        ideals_of_l: ideals.len(),
        generators_tried: candidates.len(),
        distinct_theta_ideals: found.len(),
        forward_ok,
        backward_ok,
    }
}

/// No proper nonzero θ-ideal: every nonzero K-form element x has
/// x^p ∈ F^×, hence is a unit.  Exhaustive, or over `sample` elements.
pub fn theta_simplicity(ring: &ThetaRing, sample: Option<(usize, u64)>) -> bool {
    let p = ring.p();
    let d = ring.dim();
    let candidates: Vec<FpVec> = match sample {
        None => linalg::all_vectors(d, p).collect(),
        Some((n, seed)) => {
            let mut rng = crate::random::rng(seed);
            (0..n).map(|_| (0..d).map(|_| crate::random::fp(&mut rng, p)).collect()).collect()
        }
    };
    candidates.iter().filter(|v| !linalg::is_zero(v)).all(|v| {
        let x: RElem = v.iter().map(|c| SigmaPoly::from_fp(*c, ring.nvars())).collect();
        let y = ring.pow(&x, p as usize);
        !y[0].is_zero() && y[1..].iter().all(|c| c.is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mupmup2() -> ThetaRing {
        ThetaRing::mupmup(2, &[vec![1, 1, 1, 1], vec![1, 0, 1, 0]], 4).unwrap()
    }

    fn x_ideal(hopf: &HopfAlgebra, terms: &[(usize, i64)]) -> Ideal {
        let mut v = linalg::zeros(hopf.dim(), hopf.p());
        for &(i, c) in terms {
            v[i] = Fp::new(c, hopf.p());
        }
        hopf.ideal(&[v])
    }

    #[test]
    fn trivial_ring_gives_identity_gamma() {
        let r = ThetaRing::trivial(2, 2).unwrap();
        let c = Coaction::new(&r, HopfAlgebra::mu(2, 1), vec![]).unwrap();
        let g = build_torsor_gamma(&r, c).unwrap();
        assert_eq!(g.gamma(&vec![SigmaPoly::one(&r.ctx())]), vec![SigmaPoly::one(&r.ctx())]);
        assert_eq!(constants_of_square(&r).dim, 1);
    }

    #[test]
    fn mupmup_invariance_examples() {
        let r = mupmup2();
        let g = build_torsor_gamma(&r, Coaction::diagonal(&r).unwrap()).unwrap();
        let hopf = g.hopf().clone();
        // x1 at index 2, x2 at index 1, x1 x2 at index 3
        let h = x_ideal(&hopf, &[(3, 1), (0, -1)]);
        let r1r2 = r.basis(3);
        assert!(g.invariance_test(&r1r2, &r.one(), &h));
        assert!(!g.invariance_test(&r.basis(1), &r.one(), &h));
        let f = r.scalar(SigmaPoly::from_ratfunc(crate::algebra::RatFunc::t(2), 2));
        assert!(g.invariance_test(&f, &r.one(), &h));
    }

    #[test]
    fn broken_coaction_is_rejected() {
        let r = mupmup2();
        let hopf = hopf_power(&HopfAlgebra::mu(2, 2), 2);
        let t = Tensor { ring: &r, hopf: &hopf };
        // r_1 ↦ r_1 ⊗ x_2 and r_2 ↦ r_2 ⊗ x_2 is a comodule map but r_1 ↦ r_2 ⊗ 1 is not
        let bad = vec![t.pure(&r.basis(2), hopf.unit()), t.pure(&r.basis(2), &linalg::unit(4, 1, 2))];
        assert!(Coaction::new(&r, hopf, bad).is_err());
    }

    #[test]
    fn additive_coaction_on_default_example() {
        let r = ThetaRing::alpalp(2, &[vec![1, 1, 1, 1], vec![1, 0, 1, 0]], 4).unwrap();
        let g = build_torsor_gamma(&r, Coaction::additive(&r).unwrap()).unwrap();
        let c = constants_of_square(&r);
        assert_eq!(c.dim, 4);
        assert_eq!(g.transport_constants(&c.basis), Some(4));
    }

    #[test]
    fn invariant_subalgebras_of_mupmup() {
        let r = mupmup2();
        let g = build_torsor_gamma(&r, Coaction::diagonal(&r).unwrap()).unwrap();
        let hopf = g.hopf().clone();
        let span_is = |basis: &[RElem], expected: &[RElem]| {
            let rows: Vec<Vec<SigmaPoly>> = basis.to_vec();
            let exp: Vec<Vec<SigmaPoly>> = expected.to_vec();
            sigma::same_span(&rows, &exp)
        };
        let inv = g.invariant_subalgebra(&hopf.zero_ideal()).unwrap();
        assert!(span_is(&inv, &[r.one()]));
        let inv = g.invariant_subalgebra(&hopf.augmentation_ideal()).unwrap();
        assert_eq!(inv.len(), r.dim());
        // (x1 - 1) fixes r1, (x1 x2 - 1) fixes r1 r2
        let inv = g.invariant_subalgebra(&x_ideal(&hopf, &[(2, 1), (0, -1)])).unwrap();
        assert!(span_is(&inv, &[r.one(), r.basis(1)]));
        let inv = g.invariant_subalgebra(&x_ideal(&hopf, &[(3, 1), (0, -1)])).unwrap();
        assert!(span_is(&inv, &[r.one(), r.basis(3)]));
        assert!(g.is_theta_subalgebra(&inv));
    }

    #[test]
    fn quotient_torsor_for_a_hopf_ideal() {
        let r = mupmup2();
        let g = build_torsor_gamma(&r, Coaction::diagonal(&r).unwrap()).unwrap();
        let h = x_ideal(g.hopf(), &[(2, 1), (0, -1)]);
        assert!(g.hopf().is_hopf_ideal(&h));
        let q = g.quotient_torsor(&h).unwrap();
        assert_eq!(q.invariant_ring_dim, 2);
        assert_eq!(q.quotient_hopf_dim, 2);
        assert!(q.verdict());
    }

    #[test]
    fn theta_ideals_correspond_to_ideals() {
        let r = mupmup2();
        let ib = ideal_bijection(&r, &HopfAlgebra::mu(2, 2), Some((12, 5)));
        assert!(ib.forward_ok && ib.backward_ok);
        assert!(ib.verdict());
        assert!(theta_simplicity(&r, None));
    }
}
