//! Rational polyhedral cones, Hilbert bases and semigroups of lattice
//! points, boundary slopes of the nef cone, and the polyhedrality decision.
//!
//! Cones live in `Z^ρ` with `ρ ≤ 3`. Hilbert bases are found by bounded
//! enumeration; the bound comes from the fact that every basis element is a
//! combination of extremal rays with coefficients in `[0, 1]`.

mod cone;
mod decide;
pub mod linalg;
mod semigroup;
mod slope;

pub use cone::{dual_cone, Pairing, RationalCone};
pub use decide::{
    decide_polyhedral, Evidence, PolyhedralityVerdict, WitnessKind, ABSTRACT_FACTOR_ID,
};
pub use semigroup::{
    box_points, check_box, hilbert_basis, hilbert_box, semigroup_restrict, transfer_generators,
    verify_hilbert_basis, Membership, SemigroupBasis, Sublattice, Transfer,
};
pub use slope::{boundary_slope, bracket, nef_at, slope_constraints, SAMPLE_DENOMINATOR};

use crate::exactnum::ExactError;
use crate::ns_lattice::NsError;

pub const MAX_CONE_RANK: usize = 3;

/// Largest coordinate accepted in cone, semigroup, sublattice and pairing
/// input documents.
pub const MAX_INPUT_COORD: i64 = 1000;

/// Largest ambient rank accepted in those documents: the Néron–Severi rank
/// of a product in the largest supported dimension.
pub const MAX_INPUT_RANK: usize = 144;

/// Default half-width of verification boxes.
pub const DEFAULT_VERIFY_BOX: i64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("cone rank {0} is above the supported maximum of 3")]
    RankTooLarge(usize),
    #[error("pairing is degenerate")]
    DegeneratePairing,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone generators must be non-zero")]
    ZeroRay,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("sublattice has infinite index")]
    InfiniteIndex,
    #[error("semigroup is not saturated in its cone")]
    NotSaturated,
    #[error("first class is not ample")]
    NotAmple,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("search too large: {0}")]
    SearchTooLarge(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Ns(#[from] NsError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
