use crate::algebra::{ExtCtx, ExtElem, Poly, RatFunc, Ring};
use crate::cga::{eval_ratfunc, CgaElement};

use super::{HderivError, HigherDerivation};

fn twisted(m: &Poly<RatFunc>, t_img: &CgaElement<ExtElem>) -> Result<Vec<CgaElement<ExtElem>>, HderivError> {
    m.coeffs().iter().map(|c| Ok(eval_ratfunc(c, t_img)?)).collect()
}

fn horner(coeffs: &[CgaElement<ExtElem>], z: &CgaElement<ExtElem>) -> CgaElement<ExtElem> {
    let mut acc = CgaElement::zero(&z.ctx());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

/// Extends ψ from F_p(t) to F_p(t)[y]/(m) by Newton iteration in the
/// nilpotent ideal (T); exactly N steps are taken.
pub fn newton_extend(psi: &HigherDerivation<RatFunc>, m: &Poly<RatFunc>) -> Result<HigherDerivation<ExtElem>, HderivError> {
    if !m.leading().is_some_and(|l| l.is_one()) || m.degree() == Some(0) {
        return Err(HderivError::Algebra(crate::algebra::AlgebraError::Parse(format!(
            "extension polynomial {m} must be monic of positive degree"
        ))));
    }
    let ctx = ExtCtx::new(m.clone());
    let dm = m.derivative();
    let y = ExtElem::y(&ctx);
    if ExtElem::from_poly(dm.clone(), &ctx).try_inverse().is_none() {
        return Err(HderivError::NotEtale);
    }
    let desc = psi.descriptor().clone();
    let t_img = psi.images()[0].map_coeffs(&ctx, |c| ExtElem::from_base(c.clone(), &ctx));
    let mt = twisted(m, &t_img)?;
    let dmt = twisted(&dm, &t_img)?;
    let mut z = CgaElement::scalar(&desc, y);
    for _ in 0..psi.order() {
        let val = horner(&mt, &z);
        let slope = horner(&dmt, &z).try_inverse().ok_or(HderivError::NotEtale)?;
        z = z.sub(&val.mul(&slope));
    }
    HigherDerivation::new(&ctx, psi.order(), vec![t_img, z])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hderiv::phi_t_ratfunc;

    fn poly(p: u32, c: &[&str]) -> Poly<RatFunc> {
        Poly::new(c.iter().map(|s| RatFunc::parse(s, p).unwrap()).collect(), p)
    }

    #[test]
    fn artin_schreier_coefficients() {
        let p = 2;
        let ext = newton_extend(&phi_t_ratfunc(p, 16), &poly(p, &["t", "1", "1"])).unwrap();
        let z = ext.images()[1].series_coeffs();
        for (k, c) in z.iter().enumerate().skip(1) {
            assert_eq!(c.is_one(), k.is_power_of_two(), "k={k}");
            assert!(c.is_one() || c.is_zero());
        }
        assert!(ext.is_iterative(16).verdict);
    }

    #[test]
    fn trivial_extension_gives_image() {
        let p = 3;
        let phi = phi_t_ratfunc(p, 6);
        let r = RatFunc::parse("t^2/(1+t)", p).unwrap();
        let ext = newton_extend(&phi, &poly(p, &["-t^2/(1+t)", "1"])).unwrap();
        let expect = phi.image(&r).unwrap().series_coeffs();
        let got = ext.images()[1].series_coeffs();
        for (a, b) in expect.iter().zip(&got) {
            assert_eq!(ExtElem::from_base(a.clone(), ext.ctx()), *b);
        }
    }

    #[test]
    fn square_root_of_one_plus_t() {
        let p = 3;
        let ext = newton_extend(&phi_t_ratfunc(p, 12), &poly(p, &["-1-t", "0", "1"])).unwrap();
        let z = &ext.images()[1];
        let sq = z.mul(z).series_coeffs();
        let ctx = ext.ctx();
        assert_eq!(sq[0], ExtElem::parse("1+t", ctx).unwrap());
        assert!(sq[1].is_one());
        assert!(sq[2..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn inseparable_is_rejected() {
        let p = 2;
        let r = newton_extend(&phi_t_ratfunc(p, 4), &poly(p, &["t", "0", "1"]));
        assert!(matches!(r, Err(HderivError::NotEtale)));
    }
}
