//! A laboratory for numerical semigroups.
//!
//! * [`semigroup`]: exact Frobenius number, genus and embedding dimension of
//!   `<A>` for a finite generator set, via Apéry tables, plus a bitset prefix
//!   table that serves as an independent oracle.
//! * [`random`]: exact sampling of the semigroup generated by a Bernoulli(p)
//!   random subset of the positive integers.
//! * [`lemmas`]: partition counts, modular subset-sum coverage and the
//!   distinct-resample procedure, checked exactly or by Monte Carlo.
//! * [`experiments`]: seeded, parallel, CSV-emitting studies built on the above.

pub mod error;
pub mod experiments;
pub mod lemmas;
pub mod random;
pub mod semigroup;
pub mod stats;

pub use error::{Error, Result};
pub use semigroup::{
    apery_set, frobenius, genus, invariants, membership, minimal_generators, normalize_generators,
    semigroup_prefix, AperyTable, GeneratorSet, InvariantsRecord, MembershipTable,
};
