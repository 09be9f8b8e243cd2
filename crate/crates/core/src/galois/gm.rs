//! The graded ring F[s, s^{-1}] with θ^(p^l)(s) = a_l t^{-p^l} s, in a degree
//! window |deg| ≤ D, and its coaction s ↦ s ⊗ x into K[x, x^{-1}].

use std::collections::BTreeMap;

use crate::algebra::{Matrix, RatFunc, Ring};
use crate::idmod::check_equation_form;

use super::ring::Generator;
use super::GaloisError;

/// Laurent polynomial in x over F_p, for the graded K[G_m] window.
pub type Graded = BTreeMap<i32, i64>;

#[derive(Clone, Debug)]
pub struct GmRing {
    p: u32,
    depth: u32,
    window: i32,
    digits: Vec<u32>,
    /// θ(s^j) = s^j · powers[j + D](T)
    powers: Vec<Vec<RatFunc>>,
}

/// Elementwise series product truncated to the common length.
fn mul_series(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    let p = a[0].p();
    (0..a.len()).map(|k| (0..=k).fold(RatFunc::zero(&p), |acc, i| acc.add(&a[i].mul(&b[k - i])))).collect()
}

fn inv_series(a: &[RatFunc]) -> Vec<RatFunc> {
    let p = a[0].p();
    let mut out = vec![RatFunc::one(&p)];
    for k in 1..a.len() {
        let acc = (1..=k).fold(RatFunc::zero(&p), |acc, i| acc.add(&a[i].mul(&out[k - i])));
        out.push(acc.neg());
    }
    out
}

impl GmRing {
    /// Builds the window and verifies the iteration rule for every s^j in it.
    pub fn new(p: u32, digits: &[u32], depth: u32, window: u32) -> Result<Self, GaloisError> {
        let t = RatFunc::t(p);
        let c: Vec<RatFunc> = (0..depth as usize)
            .map(|l| {
                let a = digits.get(l).copied().unwrap_or(0);
                let q = (p as u64).pow(l as u32);
                RatFunc::from_int(&p, a as i64).mul(&t.pow(q).try_inverse().expect("t ≠ 0"))
            })
            .collect();
        let u = Generator::diagonal_from_ide(p, depth, &c)?.series().to_vec();
        let uinv = inv_series(&u);
        let d = window as i32;
        let mut powers = vec![];
        for j in -d..=d {
            let base = if j >= 0 { &u } else { &uinv };
            let mut acc = vec![RatFunc::zero(&p); u.len()];
            acc[0] = RatFunc::one(&p);
            for _ in 0..j.unsigned_abs() {
                acc = mul_series(&acc, base);
            }
            let mats: Vec<_> = acc.iter().map(|x| Matrix::from_rows(vec![vec![x.clone()]]).expect("1x1")).collect();
            let rep = check_equation_form(&mats, p);
            if !rep.verdict {
                return Err(GaloisError::IterativityFailure(format!("s^{j}: {rep}")));
            }
            powers.push(acc);
        }
        Ok(GmRing { p, depth, window: d, digits: digits.to_vec(), powers })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn window(&self) -> i32 {
        self.window
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// θ^(k)(s^j) / s^j for k < p^L.
    pub fn theta_monomial(&self, j: i32) -> &[RatFunc] {
        &self.powers[(j + self.window) as usize]
    }

    /// θ^(k)(s) = 0 for all k ≥ 1.
    pub fn s_is_constant(&self) -> bool {
        self.theta_monomial(1).iter().skip(1).all(|x| x.is_zero())
    }

    /// ρ(s^j) = s^j ⊗ x^j; returns the x-part.
    pub fn coaction(&self, j: i32) -> Graded {
        BTreeMap::from([(j, 1)])
    }

    /// Comodule axioms and θ-equivariance on the monomial window.
    pub fn check_coaction(&self) -> bool {
        (-self.window..=self.window).all(|j| {
            let rho = self.coaction(j);
            // (ρ ⊗ id)ρ and (id ⊗ Δ)ρ, both as (s-degree, x-degree, x-degree)
            let lhs: Vec<(i32, i32, i32)> = rho.keys().flat_map(|&a| self.coaction(j).into_keys().map(move |b| (j, b, a))).collect();
            let rhs: Vec<(i32, i32, i32)> = rho.keys().map(|&a| (j, a, a)).collect();
            // counit ε(x^a) = 1
            let counit = rho.values().sum::<i64>() == 1;
            // θ acts on the R-factor only and θ(s^j) is a multiple of s^j
            let equivariant = rho.keys().all(|&a| a == j);
            lhs == rhs && counit && equivariant
        })
    }

    /// γ(s^a ⊗ s^b) = s^{a+b} ⊗ x^b; bijective on the window because the
    /// inverse s^c ⊗ x^b ↦ s^{c-b} ⊗ s^b stays inside it when degrees allow.
    pub fn gamma(&self, a: i32, b: i32) -> (i32, Graded) {
        (a + b, self.coaction(b))
    }

    /// r = s^a, s = s^b: γ(r⊗s - s⊗r) ∈ R ⊗ (x^k - 1), tested through the
    /// residue sums of the x-part.
    pub fn invariance_test(&self, a: i32, b: i32, k: u32) -> bool {
        let mut diff = Graded::new();
        *diff.entry(b).or_insert(0) += 1;
        *diff.entry(a).or_insert(0) -= 1;
        in_ideal_x_k(&diff, k, self.p)
    }
}

/// f ∈ (x^k - 1) in F_p[x, x^{-1}] iff each residue class of exponents mod
/// k has coefficient sum 0.
pub fn in_ideal_x_k(f: &Graded, k: u32, p: u32) -> bool {
    let k = k as i32;
    let mut sums: BTreeMap<i32, i64> = BTreeMap::new();
    for (&e, &c) in f {
        *sums.entry(e.rem_euclid(k)).or_insert(0) += c;
    }
    sums.values().all(|s| s.rem_euclid(p as i64) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_is_the_solution_for_a0_one() {
        // a_0 = 1, p = 2: θ^(1)(s) = s/t, θ^(2)(s) = 0, as for s = t
        let g = GmRing::new(2, &[1], 2, 2).unwrap();
        let u = g.theta_monomial(1);
        let t = RatFunc::t(2);
        assert_eq!(u[1], t.try_inverse().unwrap());
        assert!(u[2].is_zero() && u[3].is_zero());
        for (k, c) in t.hasse_series(3).iter().enumerate() {
            assert_eq!(*c, u[k].mul(&t));
        }
    }

    #[test]
    fn zero_digits_make_s_constant() {
        let g = GmRing::new(3, &[0, 0], 2, 2).unwrap();
        assert!(g.s_is_constant());
        assert!(g.check_coaction());
    }

    #[test]
    fn residue_class_membership() {
        let f = Graded::from([(3, 1), (-1, -1)]);
        assert!(in_ideal_x_k(&f, 4, 5));
        assert!(in_ideal_x_k(&f, 2, 5));
        assert!(!in_ideal_x_k(&f, 3, 5));
    }

    #[test]
    fn powers_of_s_are_invariant() {
        let g = GmRing::new(3, &[1, 2], 2, 3).unwrap();
        for k in 1..=6 {
            for a in 0..=3 {
                let b = -(k as i32 - a);
                if b.abs() <= 3 {
                    assert!(g.invariance_test(a, b, k));
                }
            }
        }
        assert!(!g.invariance_test(1, 0, 2));
    }
}
