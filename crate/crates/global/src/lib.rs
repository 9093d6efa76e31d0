//! Arithmetic of definite rational quaternion algebras ramified at one odd
//! prime, and the weight-zero automorphic spaces attached to their orders.
//!
//! The pipeline runs from scratch on exact integers and rationals:
//!
//! ```text
//!   algebra    (a, b | Q), Hilbert symbols, choice of (a, b) for a prime p
//!   lattice    rank-4 Z-lattices in the algebra, HNF-canonical
//!   order      maximal orders, the ramified two-sided ideal, special suborders
//!   classset   right ideal classes by neighbor graphs with a mass certificate
//!   brandt     Hecke action on weight-zero functions over the class set
//!   spaces     Eisenstein, cusp, old, and new subspaces
//!   decomp     order ladders, eigensystem extraction, structure checks
//!   classical  dimension formulas for weight-k level-N cusp forms
//! ```
//!
//! No floating point is used anywhere; all linear algebra is over Z or Q and
//! all positive definite enumeration is exact.

pub mod algebra;
pub mod brandt;
pub mod cache;
pub mod classical;
pub mod classset;
pub mod decomp;
pub mod lattice;
pub mod order;
pub mod shortvec;
pub mod spaces;

/// Errors surfaced by the quaternionic side.
#[derive(Debug, thiserror::Error)]
pub enum GlobalError {
    #[error("p must be an odd prime, got {0}")]
    InvalidPrime(u64),
    #[error("lattice generators do not span a full rank-4 lattice")]
    DegenerateLattice,
    #[error("lattice is not an order: {0}")]
    NotAnOrder(String),
    #[error("maximal-order saturation stalled at reduced discriminant {0}")]
    SaturationStalled(String),
    #[error("no square root of the requested discriminant in the p-adic completion")]
    NoSquareRoot,
    #[error("class-set mass mismatch: found {found}, expected {expected}")]
    MassMismatch { found: String, expected: String },
    #[error("Brandt index {0} shares a factor with the ramified prime or the level")]
    BadBrandtIndex(u64),
    #[error("order is not contained in the claimed superorder")]
    NotASuborder,
    #[error("ladder is missing the superorder {0}")]
    MissingSuperorder(String),
    #[error("eigensystem factorizations disagree between weight vectors; enlarge the Hecke window")]
    EigensystemCollision,
    #[error("subspace is not stable under the Hecke combination")]
    UnstableSpace,
    #[error("Eisenstein functionals are linearly dependent on this class set")]
    DependentEisenstein,
    #[error("{0}")]
    Message(String),
}
