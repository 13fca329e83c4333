//! Exact computational algebra for flag-pair orbits.
//!
//! This crate realises three closely related algebras on the basis of
//! GL(V)-orbits of pairs of n-step flags in an r-dimensional space:
//!
//! - the q-Schur algebra `S_q(n,r)` over Z[q], with structure constants
//!   recovered exactly from point counts over small prime fields
//!   ([`qschur`]),
//! - the generic algebra `G(n,r)` whose product of two orbits is the unique
//!   open orbit in the support of their q-Schur product ([`generic`]),
//! - the 0-Hecke algebra `H_0(n)`, the block of `G(n,n)` on complete flags
//!   ([`hecke`]).
//!
//! Everything is exact: polynomial coefficients are arbitrary-precision
//! integers, and every closed-form rule is backed by an independent
//! brute-force oracle over finite fields ([`fq`]).

pub mod fq;
pub mod generic;
pub mod hecke;
pub mod orbit;
pub mod qpoly;
pub mod qschur;
pub mod report;

pub use orbit::{compositions, Composition, LinePairs, OrbitMatrix, Segment};
pub use qpoly::QPoly;
pub use report::Report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// Interpolated polynomial had a non-integer coefficient or failed the
    /// held-out prime check. This means the degree bound was violated or the
    /// counts are inconsistent; it is never silently rounded away.
    #[error("inconsistent counts: {0}")]
    InconsistentCounts(String),
}

pub type Result<T> = std::result::Result<T, Error>;
