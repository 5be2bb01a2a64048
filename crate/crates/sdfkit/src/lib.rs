//! Toolkit for sets `A ⊂ Z_m` (m odd squarefree) such that `A - A` contains
//! no non-zero square of `Z_m`.
//!
//! The crate covers the whole pipeline at desk scale:
//!
//! * [`modarith`] - squarefree factorization, CRT, Legendre/Jacobi symbols;
//! * [`quadchar`] - quadratic characters, their products and exact pair-sum
//!   identities;
//! * [`sdf`] - the forbidden-difference set, the conflict graph on `Z_m`,
//!   validity checking and residue fibers;
//! * [`search`] - exact and greedy computation of the extremal size `F(m)`;
//! * [`construct`] - explicit lower-bound constructions (products, the
//!   monochromatic-clique pivot construction, pigeonhole certificates);
//! * [`bounds`] - rigorous evaluation of every upper bound and inequality,
//!   with directed rounding so a reported pass is a certificate;
//! * [`tournament`] - directed-graph products, covering families and the
//!   polynomial-method rank argument behind the tournament bound.

pub mod bitset;
pub mod bounds;
pub mod cache;
pub mod construct;
pub mod modarith;
pub mod quadchar;
pub mod sdf;
pub mod search;
pub mod tournament;

pub use modarith::Modulus;
pub use sdf::CandidateSet;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is even")]
    EvenModulus(u64),
    #[error("modulus {0} is not squarefree ({1}^2 divides it)")]
    NotSquarefree(u64, u64),
    #[error("modulus must be an odd squarefree integer >= 3, got {0}")]
    UnitModulus(u64),
    #[error("duplicate prime {0} in CRT input")]
    DuplicatePrime(u64),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("prime {0} is not congruent to {1} mod 4")]
    WrongResidueClass(u64, u64),
    #[error("no collision found: |A|^2 <= p leaves the pigeonhole empty")]
    NoCollision,
    #[error("invalid construction part: {0}")]
    InvalidPart(String),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprime(u64, u64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("subset enumeration refused for n = {0} primes (limit 14)")]
    SubsetBlowup(usize),
    #[error("family is not covering: ordered pair ({0:?}, {1:?}) has no edge coordinate")]
    NotCovering(Vec<i64>, Vec<i64>),
    #[error("set is not square-difference-free: {0} - {1} is a non-zero square")]
    InvalidSet(u64, u64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
