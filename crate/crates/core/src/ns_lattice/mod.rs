//! Néron–Severi level models of abelian varieties.
//!
//! Products of elliptic curves carry classes as Hermitian matrices over
//! their endomorphism rings (the Rosati-symmetric endomorphism attached to
//! a line bundle, relative to the product polarization). Abstract
//! presentations carry a symmetric intersection tensor instead.
//!
//! Nefness is tested through `L^i·A^{g−i} ≥ 0`. On abelian varieties this
//! agrees with being algebraically equivalent to an effective class; that
//! equivalence is not something the code can check and is taken as given.

mod class;
mod end_ring;
pub mod hermitian;
mod hom;
mod intersection;
mod variety;

pub use crate::json::build_variety;
pub use class::{ns_basis, HermitianClass, NSClass};
pub use end_ring::{EndRing, HomEntry};
pub use hom::{pullback, standard_hom, standard_hom_on, LatticeHom, StandardMap};
pub use intersection::{
    ample_reference, ample_test, analytic_charpoly, factorial_weight, intersection_number,
    mixed_with_reference, nef_test, self_intersection,
};
pub use variety::{
    AbstractVariety, Block, Factor, ProductVariety, VarietyPresentation, MAX_DIMENSION,
};

use crate::exactnum::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NsError {
    #[error("bad CM discriminant {0}: need D < 0 and D ≡ 0, 1 (mod 4)")]
    BadDiscriminant(i64),
    #[error("factor {0:?} has zero multiplicity")]
    ZeroMultiplicity(String),
    #[error("factor id {0:?} appears twice")]
    DuplicateFactor(String),
    #[error("product presentation has no factors")]
    EmptyProduct,
    #[error("dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),
    #[error("intersection tensor is not symmetric at {0:?}")]
    NonSymmetricTensor(Vec<usize>),
    #[error("malformed intersection tensor: {0}")]
    TensorShape(String),
    #[error("ample reference has non-positive top self-intersection")]
    AmpleNotPositive,
    #[error("class shape: {0}")]
    ClassShape(String),
    #[error("class kind does not match the presentation")]
    ClassKindMismatch,
    #[error("entry ({0}, {1}) is not Hermitian-compatible with its transpose")]
    NotHermitian(usize, usize),
    #[error("entry ({0}, {1}) couples non-isogenous factors and must be 0")]
    CrossFactorEntry(usize, usize),
    #[error("entry ({0}, {1}) is not in the factor's endomorphism ring")]
    EntryNotInRing(usize, usize),
    #[error("expected {expected} classes, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("non-integral value {0}")]
    NonIntegral(String),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
