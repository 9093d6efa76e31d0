//! Local arithmetic of the ramified quaternion algebra over `Q_p` for odd `p`.
//!
//! The algebra is realised as `B = M + Mj` where `M = Q_p(sqrt(u))` is the
//! unramified quadratic extension (`u` the least positive nonresidue mod `p`),
//! `j^2 = -p` and `j b = sigma(b) j` for `b` in `M`.  Its maximal order is
//! `O_B = o_M + o_M j` with radical `P = O_B j`, and the unit filtration
//! `U^0 = O_B^x`, `U^n = 1 + P^n` cuts out the finite quotients
//! `G_n = B^x / Q_p^x U^n` whose irreducible characters realise every
//! smooth irreducible of `B^x` with trivial central character and bounded
//! conductor.
//!
//! The three quadratic extensions of `Q_p` embed as `M` (unramified),
//! `K = Q_p(sqrt(-p))` with uniformiser `j`, and `L = Q_p(sqrt(-up))` with
//! uniformiser `tj` where `t` in `o_M^x` satisfies `N(t) = u`.

pub mod characters;
pub mod division;
pub mod dixon;
pub mod epsilon;
pub mod field;
pub mod reps;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LocalError {
    #[error("prime {0} is not an odd prime")]
    BadPrime(u64),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("precision {have} too small, need at least {need}")]
    Precision { have: u32, need: u32 },
    #[error("norm image of the unramified extension is all units, not squares")]
    UnramifiedNormImage,
    #[error("group size {0} exceeds the configured bound {1}")]
    TooLarge(u64, u64),
}
