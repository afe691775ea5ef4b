//! cartankit: numerics for finite-rank bounded symmetric domains.
//!
//! The open unit ball of a JB*-triple (an ℓ∞ direct sum of Cartan factors of
//! types I–IV here) is a bounded symmetric domain. This crate implements the
//! triple algebra, Peirce calculus, Bergmann/Möbius/Kobayashi geometry,
//! explicit horoballs at boundary points, and the iteration theory of
//! fixed-point-free holomorphic self-maps (Wolff points, invariant domains,
//! boundary-component dynamics).

pub mod error;
pub mod linalg;
pub mod space;
mod spin;
pub mod operator;
pub mod triple;
pub mod spectral;
pub mod bergmann;
pub mod horoball;
pub mod dynamics;
pub mod report;
pub mod cli;

pub use error::{CartanError, Result};
pub use operator::{LinearOp, NormEstimator};
pub use space::{
    inject_summand, project_summand, random_element, spin_conjugate, Element, FactorKind,
    TripleSpace,
};
pub use spectral::{
    are_orthogonal, is_tripotent, joint_peirce_projection, peirce_projection, rank_of,
    refine_to_minimal_frame, spectral_decompose, spectral_decompose_coarse, Frame, SpectralDecomp,
    Tripotent,
};
pub use triple::{box_operator, quadratic_rep, triple_product};
