//! Seeded generators for test inputs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Fp, MPoly, Poly, RatFunc, Ring};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fp(rng: &mut impl Rng, p: u32) -> Fp {
    Fp::new(rng.gen_range(0..p as i64), p)
}

pub fn nonzero_fp(rng: &mut impl Rng, p: u32) -> Fp {
    Fp::new(rng.gen_range(1..p as i64), p)
}

/// Polynomial of degree ≤ deg with uniform coefficients.
pub fn poly(rng: &mut impl Rng, p: u32, deg: usize) -> Poly<Fp> {
    Poly::new((0..=deg).map(|_| fp(rng, p)).collect(), p)
}

/// Rational function with numerator and monic denominator of degree ≤ deg.
pub fn ratfunc(rng: &mut impl Rng, p: u32, deg: usize) -> RatFunc {
    let num = poly(rng, p, deg);
    loop {
        let d = rng.gen_range(0..=deg);
        let mut den = poly(rng, p, d);
        if den.is_zero() {
            continue;
        }
        den = den.monic();
        return RatFunc::new(num, den).expect("nonzero denominator");
    }
}

/// Rational function without a pole at t = 0.
pub fn regular_ratfunc(rng: &mut impl Rng, p: u32, deg: usize) -> RatFunc {
    loop {
        let f = ratfunc(rng, p, deg);
        if f.is_regular_at_zero() {
            return f;
        }
    }
}

pub fn ratfunc_poly(rng: &mut impl Rng, p: u32, deg: usize) -> RatFunc {
    RatFunc::from_poly(poly(rng, p, deg))
}

/// Sparse polynomial in m variables with total degree ≤ deg.
pub fn mpoly(rng: &mut impl Rng, p: u32, m: usize, deg: u32, terms: usize) -> MPoly<Fp> {
    let items: Vec<(Vec<u32>, Fp)> = (0..terms)
        .map(|_| {
            let mut e = vec![0u32; m];
            let mut left = rng.gen_range(0..=deg);
            for x in e.iter_mut() {
                let v = rng.gen_range(0..=left);
                *x = v;
                left -= v;
            }
            (e, fp(rng, p))
        })
        .collect();
    MPoly::from_terms(items, m, p)
}

/// ψ on F_p[t_1..t_m] with ψ^(k)(t_j) random of degree ≤ 2, k ≥ 1.
pub fn higher_derivation(rng: &mut impl Rng, p: u32, m: usize, order: usize) -> crate::hderiv::HigherDerivation<MPoly<Fp>> {
    let ctx = (p, m);
    let images = (0..m)
        .map(|j| {
            let mut c = vec![MPoly::var(j, m, &p)];
            c.extend((1..=order).map(|_| mpoly(rng, p, m, 2, 2)));
            c
        })
        .collect();
    crate::hderiv::HigherDerivation::from_components(&ctx, order, images).expect("augmented by construction")
}
