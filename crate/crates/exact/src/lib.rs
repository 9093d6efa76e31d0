//! Exact arithmetic building blocks: machine-word number theory, big-integer
//! linear algebra, Hermite and Smith normal forms, finite abelian group
//! structure, cyclotomic integers, dense polynomials over prime fields,
//! division-free characteristic polynomials, real root counting, and
//! factorization in Z[x].
//!
//! Everything here is deterministic and exact; no floating point appears
//! anywhere in the workspace's mathematical core.

pub mod numutil;
pub mod matrix;
pub mod snf;
pub mod abelian;
pub mod cyclotomic;
pub mod modpoly;
pub mod flmat;
pub mod charpoly;
pub mod sturm;
pub mod polyfactor;
