use proptest::prelude::*;

use itconn_core::algebra::{Fp, MPoly};
use itconn_core::connection::{coevaluation, evaluation, HigherConnection};
use itconn_core::hderiv::phi_t;
use itconn_core::hdiff::DifAlgebra;
use itconn_core::random;

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn d_r_is_universal(p in prime(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (m, order) = (2, 5);
        let dif = DifAlgebra::<MPoly<Fp>>::new(&(p, m), order);
        let psi = random::higher_derivation(&mut rng, p, m, order);
        let r = random::mpoly(&mut rng, p, m, 3, 4);
        let via_dif = dif.evaluate(&psi, &dif.d_r(&r).unwrap()).unwrap();
        prop_assert_eq!(via_dif, psi.image(&r).unwrap());
    }

    #[test]
    fn scaled_d_dif_composes_additively(p in prime(), a in 0i64..5, b in 0i64..5) {
        let ctx = (p, 2);
        let dif = DifAlgebra::<MPoly<Fp>>::new(&ctx, 6);
        let c = |x: i64| MPoly::constant(Fp::new(x, p), 2);
        let lhs = dif.d_dif_scaled(&c(a)).compose(&dif.d_dif_scaled(&c(b))).unwrap();
        prop_assert!(lhs.agrees_with(&dif.d_dif_scaled(&c(a + b))));
    }

    #[test]
    fn commuting_iterative_derivations_compose(p in prime(), a in 1i64..5, b in 1i64..5) {
        let ctx = (p, 2);
        let order = 10;
        let f1 = phi_t::<Fp>(&p, 2, 0, order).scale_action(&MPoly::constant(Fp::new(a, p), 2));
        let f2 = phi_t::<Fp>(&p, 2, 1, order).scale_action(&MPoly::constant(Fp::new(b, p), 2));
        let prod = f1.multiply(&f2).unwrap();
        prop_assert!(prod.is_iterative(order).verdict);
        prop_assert!(prod.agrees_with(&f2.multiply(&f1).unwrap()));
        prop_assert_eq!(prod.ctx(), &ctx);
    }

    #[test]
    fn evaluation_and_coevaluation_are_horizontal(n in 1usize..=3, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (p, order) = (3, 4);
        let ctx = (p, 1);
        let dif = DifAlgebra::<MPoly<Fp>>::new(&ctx, order);
        let one = HigherConnection::trivial(&dif, 1);
        let c = HigherConnection::random(&mut rng, &dif, n, 3);
        let dual = c.dual().unwrap();
        prop_assert!(c.tensor(&dual).unwrap().is_morphism(&one, &evaluation(n, &ctx)).unwrap());
        prop_assert!(one.is_morphism(&dual.tensor(&c).unwrap(), &coevaluation(n, &ctx)).unwrap());
        prop_assert!(c.dual_cross_check().unwrap());
    }

    #[test]
    fn tensor_commutes_with_psi(n1 in 1usize..=2, n2 in 1usize..=2, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (p, order) = (2, 4);
        let dif = DifAlgebra::<MPoly<Fp>>::new(&(p, 1), order);
        let c1 = HigherConnection::random(&mut rng, &dif, n1, 2);
        let c2 = HigherConnection::random(&mut rng, &dif, n2, 2);
        let psi = random::higher_derivation(&mut rng, p, 1, order);
        let lhs = c1.tensor(&c2).unwrap().apply_psi(&psi).unwrap();
        let rhs = c1.apply_psi(&psi).unwrap().omega().kron(c2.apply_psi(&psi).unwrap().omega());
        prop_assert_eq!(lhs.omega(), &rhs);
    }
}
