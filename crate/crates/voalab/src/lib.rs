//! voalab: exact-arithmetic verification engine for rank-one lattice vertex
//! algebras and their logarithmic modules.
//!
//! Everything here is computed over arbitrary-precision rationals; there is no
//! floating point anywhere in the crate.  The library is organised bottom-up:
//!
//! * [`exactmath`] — rationals, sparse linear algebra, colored partitions;
//! * [`fockspace`] — lattice contexts, Fock monomials, graded bases;
//! * [`vertexops`] — Heisenberg / exponential / composite mode operators,
//!   bracket and locality checks;
//! * [`screenings`] — screening zero modes, kernel strata, triplet and
//!   `W_{p,p'}` generators, strong-generation spans;
//! * [`zhuc2`] — Zhu `*`/`∘` products, `o(a)` zero modes, C2 and O(V)
//!   membership with truncation policies;
//! * [`logdeform`] — the charge-two screening modes `G(n)`, two-coset modules,
//!   delta deformations and Jordan-block diagnostics;
//! * [`suites`], [`report`], [`config`] — the named verification suites and
//!   the deterministic report plumbing behind the `voalab` binary.

pub mod config;
pub mod exactmath;
pub mod fockspace;
pub mod logdeform;
pub mod report;
pub mod screenings;
pub mod suites;
pub mod vertexops;
pub mod zhuc2;

use thiserror::Error;

/// Errors surfaced by the library.  Numerical checks never "fail" through this
/// type — a failed identity is reported as data — these are for rejected
/// inputs and configuration problems.
#[derive(Debug, Error)]
pub enum VoalabError {
    #[error("rejected input: {0}")]
    Rejected(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}
