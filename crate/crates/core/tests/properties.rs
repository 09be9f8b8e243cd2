use proptest::prelude::*;

use itconn_core::algebra::{binomial_mod_p, Fp, MPoly, Matrix, RatFunc, Ring};
use itconn_core::hderiv::{phi_t, phi_t_ratfunc, HigherDerivation};
use itconn_core::idmod::{frobenius_compatibility, kernel_descent, FcProjSystem};
use itconn_core::random;
use itconn_core::solver::{conjugation_equation, constant_ratio, determinant_equation, solve_fundamental, verify_solution, SeriesMatrix};

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5)]
}

/// Pascal's triangle mod p, row by row.
fn pascal(n: usize, p: u32) -> Vec<Vec<u32>> {
    let mut rows = vec![vec![1u32]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let row = (0..=i)
            .map(|k| {
                let a = if k > 0 { prev[k - 1] } else { 0 };
                let b = if k < i { prev[k] } else { 0 };
                (a + b) % p
            })
            .collect();
        rows.push(row);
    }
    rows
}

#[test]
fn lucas_agrees_with_pascal() {
    for p in [2, 3, 5, 7] {
        let rows = pascal(64, p);
        for (n, row) in rows.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                assert_eq!(binomial_mod_p(n as u64, k as u64, p).value(), c, "C({n}, {k}) mod {p}");
            }
            assert!(binomial_mod_p(n as u64, n as u64 + 1, p).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ratfunc_field_axioms(p in prime(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b, c) = (random::ratfunc(&mut rng, p, 3), random::ratfunc(&mut rng, p, 3), random::ratfunc(&mut rng, p, 3));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert!(a.sub(&a).is_zero());
        if let Some(ai) = a.try_inverse() {
            prop_assert!(a.mul(&ai).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn ratfunc_text_round_trips(p in prime(), seed in any::<u64>()) {
        let f = random::ratfunc(&mut random::rng(seed), p, 4);
        let text = f.to_string();
        let back = RatFunc::parse(&text, p).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn pth_root_inverts_frobenius(p in prime(), seed in any::<u64>()) {
        let f = random::ratfunc(&mut random::rng(seed), p, 3);
        let fp = f.pow(p as u64);
        prop_assert_eq!(fp.pth_root().unwrap(), f.clone());
        prop_assert_eq!(f.inflate(p as usize), fp);
    }

    #[test]
    fn frobenius_coordinates_reassemble(p in prop_oneof![Just(2u32), Just(3)], l in 1u32..=3, seed in any::<u64>()) {
        let f = random::ratfunc(&mut random::rng(seed), p, 3);
        let coords = f.frobenius_expand(l);
        prop_assert_eq!(coords.len(), (p as usize).pow(l));
        let t = RatFunc::t(p);
        let sum = coords.iter().enumerate().fold(RatFunc::zero(&p), |acc, (a, c)| acc.add(&c.mul(&t.pow(a as u64))));
        prop_assert_eq!(sum, f);
        for c in &coords {
            prop_assert!(c.pth_root_iter(l).is_ok());
        }
    }

    #[test]
    fn kernel_criterion_matches_pth_roots(p in prop_oneof![Just(2u32), Just(3)], l in 1u32..=3, power in any::<bool>(), seed in any::<u64>()) {
        let f = random::ratfunc(&mut random::rng(seed), p, 2);
        let f = if power { f.inflate((p as usize).pow(l)) } else { f };
        let fc = frobenius_compatibility(&f, l).unwrap();
        prop_assert!(fc.agree(), "{f}: {fc:?}");
        if power {
            prop_assert!(fc.kernel);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn higher_derivations_form_a_group(p in prime(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let order = 6;
        let [a, b, c]: [HigherDerivation<MPoly<Fp>>; 3] = std::array::from_fn(|_| random::higher_derivation(&mut rng, p, 2, order));
        let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert!(ab_c.agrees_with(&a_bc));
        let id = HigherDerivation::identity(&(p, 2), order);
        let ai = a.invert().unwrap();
        prop_assert!(a.multiply(&ai).unwrap().agrees_with(&id));
        prop_assert!(ai.multiply(&a).unwrap().agrees_with(&id));
    }

    #[test]
    fn scalar_action_is_additive_on_phi(p in prime(), a in 0i64..5, b in 0i64..5) {
        let order = 12;
        let phi = phi_t::<Fp>(&p, 1, 0, order);
        let (fa, fb) = (MPoly::constant(Fp::new(a, p), 1), MPoly::constant(Fp::new(b, p), 1));
        let lhs = phi.scale_action(&fa).multiply(&phi.scale_action(&fb)).unwrap();
        prop_assert!(lhs.agrees_with(&phi.scale_action(&fa.add(&fb))));
        // the action is a monoid action
        let ab = phi.scale_action(&fa.mul(&fb));
        prop_assert!(ab.agrees_with(&phi.scale_action(&fb).scale_action(&fa)));
    }

    #[test]
    fn phi_t_is_iterative(p in prime(), order in 1usize..40) {
        prop_assert!(phi_t_ratfunc(p, order).is_iterative(order).verdict);
    }

    #[test]
    fn descended_lattices_have_full_rank(p in prop_oneof![Just(2u32), Just(3)], n in 1usize..=2, depth in 1u32..=2, seed in any::<u64>()) {
        let sys = FcProjSystem::random(&mut random::rng(seed), p, n, depth, 1);
        let s = sys.to_id_structure().unwrap();
        prop_assert!(s.check().verdict);
        let back = kernel_descent(&s, depth).unwrap();
        prop_assert!(back.b.iter().all(|b| !b.det().is_zero()));
        prop_assert!(sys.same_lattices(&back).unwrap());
        // lower levels of the descent are the truncated system
        if depth > 1 {
            let low = kernel_descent(&s, depth - 1).unwrap();
            let truncated = FcProjSystem::new_unchecked(p, n, depth - 1, sys.b[..depth as usize].to_vec());
            prop_assert!(truncated.same_lattices(&low).unwrap());
        }
    }

    #[test]
    fn conjugated_equations_solve_up_to_constants(p in prime(), n in 1usize..=2, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let depth = if p == 2 { 4 } else { 2 };
        let (eq, known) = conjugation_equation(&mut rng, p, n, depth, 2).unwrap();
        let order = (p as usize).pow(depth) - 1;
        let y = solve_fundamental(&eq, order).unwrap();
        prop_assert!(verify_solution(&y, &eq, order).verdict());
        let c = constant_ratio(&y, &known);
        prop_assert!(c.is_some_and(|c| c.inverse().is_ok()));
        let det = determinant_equation(&eq).unwrap();
        let d = solve_fundamental(&det, order).unwrap();
        prop_assert_eq!(d.entry(0, 0), y.det());
    }

    #[test]
    fn series_inverse_is_two_sided(p in prime(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let mut entries = (0..4).map(|_| random::ratfunc_poly(&mut rng, p, 3)).collect::<Vec<_>>();
        // Y(0) = I
        for (i, e) in entries.iter_mut().enumerate() {
            *e = e.mul(&RatFunc::t(p));
            if i % 3 == 0 {
                *e = e.add(&RatFunc::one(&p));
            }
        }
        let m = Matrix::from_rows(vec![entries[..2].to_vec(), entries[2..].to_vec()]).unwrap();
        let y = SeriesMatrix::from_ratfunc_matrix(&m, 12).unwrap();
        let yi = y.inverse().unwrap();
        let id = SeriesMatrix::identity(2, p, 12);
        prop_assert_eq!(y.mul(&yi), id.clone());
        prop_assert_eq!(yi.mul(&y), id);
    }
}
