use std::fmt;

use super::error::AlgebraError;
use super::ring::{Field, Ring};

/// Checks that `p` is a prime accepted by the library.
pub fn check_prime(p: u32) -> Result<u32, AlgebraError> {
    if (2..=97).contains(&p) && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        Ok(p)
    } else {
        Err(AlgebraError::InvalidPrime(p))
    }
}

/// An element of the prime field F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u32,
    p: u32,
}

impl Fp {
    pub fn new(value: i64, p: u32) -> Self {
        Fp { value: value.rem_euclid(p as i64) as u32, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    /// Signed representative in (-p/2, p/2], handy for display.
    pub fn signed(self) -> i64 {
        let v = self.value as i64;
        if 2 * v > self.p as i64 {
            v - self.p as i64
        } else {
            v
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Ring for Fp {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.p
    }
    fn zero(p: &u32) -> Self {
        Fp { value: 0, p: *p }
    }
    fn one(p: &u32) -> Self {
        Fp { value: 1 % *p, p: *p }
    }
    fn from_int(p: &u32, n: i64) -> Self {
        Fp::new(n, *p)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let s = self.value + o.value;
        Fp { value: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        Fp { value: if self.value >= o.value { self.value - o.value } else { self.value + self.p - o.value }, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        Fp { value: self.value * o.value % self.p, p: self.p }
    }
    fn neg(&self) -> Self {
        Fp { value: if self.value == 0 { 0 } else { self.p - self.value }, p: self.p }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(Ring::pow(self, (self.p - 2) as u64))
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
}

impl Field for Fp {}

crate::impl_ring_ops!([] Fp);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_checked() {
        assert!(check_prime(2).is_ok());
        assert!(check_prime(97).is_ok());
        assert_eq!(check_prime(91), Err(AlgebraError::InvalidPrime(91)));
        assert!(check_prime(1).is_err());
        assert!(check_prime(101).is_err());
    }

    #[test]
    fn inverses_mod_seven() {
        for v in 1..7 {
            let a = Fp::new(v, 7);
            assert!((a * a.inv()).is_one());
        }
        assert!(Fp::new(0, 7).try_inverse().is_none());
    }

    #[test]
    fn negative_values_reduce() {
        assert_eq!(Fp::new(-1, 5).value(), 4);
        assert_eq!(Fp::new(-1, 5).signed(), -1);
    }
}
