use crate::algebra::{Field, MPoly};

use super::ConnectionError;

/// Multi-index k with (φ_{t_m}^(k_m) ∘ … ∘ φ_{t_1}^(k_1))(r) a unit at the
/// origin while every smaller index gives a non-unit.
///
/// The constant term of the composed Hasse derivative is the coefficient of
/// t^k in r, so such k are exactly the minimal exponents of the support; the
/// lexicographically smallest exponent is always one of them.
pub fn unit_derivative_search<C: Field>(r: &MPoly<C>) -> Result<Vec<u32>, ConnectionError> {
    r.terms().map(|(e, _)| e.clone()).next().ok_or(ConnectionError::ZeroInput)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, Ring};

    /// Brute force over all indices below k using actual Hasse derivatives.
    fn is_minimal_unit_index(r: &MPoly<Fp>, k: &[u32]) -> bool {
        let compose = |l: &[u32]| -> MPoly<Fp> { l.iter().enumerate().fold(r.clone(), |acc, (j, &lj)| acc.hasse(j, lj)) };
        let unit = |x: &MPoly<Fp>| !x.constant_term().is_zero();
        if !unit(&compose(k)) {
            return false;
        }
        let mut l = vec![0u32; k.len()];
        loop {
            if l != k && !l.is_empty() && unit(&compose(&l)) {
                return false;
            }
            let mut i = 0;
            while i < l.len() {
                if l[i] < k[i] {
                    l[i] += 1;
                    break;
                }
                l[i] = 0;
                i += 1;
            }
            if i == l.len() {
                return true;
            }
        }
    }

    #[test]
    fn examples() {
        let r = MPoly::<Fp>::parse("t1^2*t2", 2, &3).unwrap();
        assert_eq!(unit_derivative_search(&r).unwrap(), vec![2, 1]);
        let r = MPoly::<Fp>::parse("t^5", 1, &5).unwrap();
        assert_eq!(unit_derivative_search(&r).unwrap(), vec![5]);
        let r = MPoly::<Fp>::parse("1+t1", 2, &5).unwrap();
        assert_eq!(unit_derivative_search(&r).unwrap(), vec![0, 0]);
        let z = MPoly::<Fp>::zero(&(5, 2));
        assert!(matches!(unit_derivative_search(&z), Err(ConnectionError::ZeroInput)));
    }

    #[test]
    fn agrees_with_brute_force() {
        for src in ["t1*t2^3 + t1^2*t2 + t2^4", "t2^2 + t1^3*t2", "t1^4*t2^2+t1^2*t2^5"] {
            let r = MPoly::<Fp>::parse(src, 2, &3).unwrap();
            let k = unit_derivative_search(&r).unwrap();
            assert!(is_minimal_unit_index(&r, &k), "{src}: {k:?}");
        }
    }
}
