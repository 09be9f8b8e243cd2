//! Exact computations with iterative higher derivations in positive
//! characteristic: truncated algebras of higher differentials, iterative
//! connections, Frobenius descent, iterable equations and small Galois
//! examples.

pub mod algebra;
pub mod cga;
pub mod connection;
pub mod galois;
pub mod hderiv;
pub mod hdiff;
pub mod idmod;
pub mod random;
pub mod solver;
pub mod suite;
