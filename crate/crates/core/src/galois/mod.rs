//! Finite and graded θ-rings, Hopf algebra tables, coactions and the torsor
//! map γ: R ⊗_F R → R ⊗_K K[G], with K = F_p.

mod gm;
mod hopf;
pub mod linalg;
mod reduced;
mod ring;
mod sigma;
mod torsor;

pub use gm::{in_ideal_x_k, GmRing, Graded};
pub use hopf::{HopfAlgebra, Ideal};
pub use reduced::{kernel_theta1_is_pth_powers, reduced_and_separable, tensor_square_nilpotent, Separability};
pub use ring::{Generator, RElem, ThetaRing};
pub use sigma::{in_span, rank, same_span, SigmaPoly};
pub use torsor::{
    build_torsor_gamma, constants_of_square, hopf_power, ideal_bijection, r2_mul, r2_pure, r2_theta, theta_simplicity, Coaction,
    ConstantsOfSquare, IdealBijection, QuotientTorsor, R2Elem, RAElem, Tensor, Torsor,
};

use thiserror::Error;

use crate::idmod::IdmodError;

#[derive(Debug, Error)]
pub enum GaloisError {
    #[error(transparent)]
    Idmod(#[from] IdmodError),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("θ does not respect the relations: {0}")]
    IllDefined(String),
    #[error("iterativity failure: {0}")]
    IterativityFailure(String),
    #[error("Hopf axiom fails: {0}")]
    HopfAxiom(String),
    #[error("not a comodule algebra map: {0}")]
    NotComodule(String),
    #[error("not θ-equivariant: {0}")]
    NotEquivariant(String),
    #[error("γ is not an isomorphism: {0}")]
    NotIso(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
