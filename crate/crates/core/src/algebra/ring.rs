//! Ring and field traits shared by every coefficient type.
//!
//! Elements carry a small context (`Ring::Ctx`) so that constants such as
//! zero and one can be built without a global modulus.

use std::fmt::Debug;

pub trait Ring: Clone + PartialEq + Debug + std::fmt::Display {
    /// Data needed to build constants of the same ring.
    type Ctx: Clone + PartialEq + Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_int(ctx: &Self::Ctx, n: i64) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Multiplicative inverse if the element is a unit.
    fn try_inverse(&self) -> Option<Self>;

    /// Characteristic of the ring (0 for the rationals).
    fn characteristic(&self) -> u64;

    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx())
    }

    fn one_like(&self) -> Self {
        Self::one(&self.ctx())
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn scale_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(&self.ctx(), n))
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self {
        self.try_inverse().expect("inverse of zero")
    }

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

/// Implements the `std::ops` arithmetic traits in terms of [`Ring`].
#[macro_export]
macro_rules! impl_ring_ops {
    ([$($gen:tt)*] $ty:ty) => {
        impl<$($gen)*> ::std::ops::Add<&$ty> for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty { $crate::algebra::Ring::add(self, rhs) }
        }
        impl<$($gen)*> ::std::ops::Sub<&$ty> for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty { $crate::algebra::Ring::sub(self, rhs) }
        }
        impl<$($gen)*> ::std::ops::Mul<&$ty> for &$ty {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty { $crate::algebra::Ring::mul(self, rhs) }
        }
        impl<$($gen)*> ::std::ops::Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty { $crate::algebra::Ring::neg(self) }
        }
        impl<$($gen)*> ::std::ops::Add for $ty {
            type Output = $ty;
            fn add(self, rhs: $ty) -> $ty { $crate::algebra::Ring::add(&self, &rhs) }
        }
        impl<$($gen)*> ::std::ops::Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty { $crate::algebra::Ring::sub(&self, &rhs) }
        }
        impl<$($gen)*> ::std::ops::Mul for $ty {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty { $crate::algebra::Ring::mul(&self, &rhs) }
        }
        impl<$($gen)*> ::std::ops::Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty { $crate::algebra::Ring::neg(&self) }
        }
    };
}
