//! Exact invariants of numerical semigroups given by finite generator sets.
//!
//! The canonical representation is the [`AperyTable`] with respect to the
//! multiplicity `q`: for each residue class mod `q`, the least element of the
//! semigroup in that class. Frobenius number, genus, membership and the
//! minimal generating set all follow from it. [`MembershipTable`] is the
//! independent, brute-force view of `<A> ∩ [0, N]`.

mod apery;
pub(crate) mod membership;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use apery::{apery_set, frobenius, genus, membership, minimal_generators, AperyTable};
pub use membership::{semigroup_prefix, MembershipTable};

/// Largest generator accepted by the Apéry path; keeps every semigroup
/// element of interest well inside `u64`/`i64`.
pub const MAX_GENERATOR: u64 = 1 << 31;

/// A sorted, deduplicated, nonempty set of positive generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    elements: Vec<u64>,
    gcd: u64,
}

impl GeneratorSet {
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    /// The least generator, which is also the multiplicity of `<A>`.
    pub fn min(&self) -> u64 {
        self.elements[0]
    }

    pub fn max(&self) -> u64 {
        self.elements[self.elements.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_cofinite(&self) -> bool {
        self.gcd == 1
    }

    /// Builds a set from elements already known to be strictly increasing and
    /// positive. Used by the sampler, whose output has that shape by
    /// construction.
    pub(crate) fn from_sorted(elements: Vec<u64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidGenerators("empty generator set".into()));
        }
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements[0] >= 1);
        let gcd = elements.iter().fold(0, |g, &a| gcd(g, a));
        Ok(Self { elements, gcd })
    }
}

/// Sorts and deduplicates `raw` and computes its gcd. Redundant generators
/// other than duplicates are kept.
pub fn normalize_generators(raw: &[i64]) -> Result<GeneratorSet> {
    if raw.is_empty() {
        return Err(Error::InvalidGenerators("empty generator set".into()));
    }
    if let Some(bad) = raw.iter().find(|&&a| a <= 0) {
        return Err(Error::InvalidGenerators(format!(
            "generator {bad} is not positive"
        )));
    }
    let mut elements: Vec<u64> = raw.iter().map(|&a| a as u64).collect();
    elements.sort_unstable();
    elements.dedup();
    GeneratorSet::from_sorted(elements)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Frobenius number, genus, embedding dimension and multiplicity of one
/// numerical semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantsRecord {
    pub frobenius: i64,
    pub genus: u64,
    pub embedding_dim: u64,
    pub multiplicity: u64,
}

impl InvariantsRecord {
    /// `(F+1)/2 <= g <= F+1` and `e <= F+2`.
    pub fn satisfies_inequalities(&self) -> bool {
        let f = self.frobenius as i128;
        let g = self.genus as i128;
        let e = self.embedding_dim as i128;
        f + 1 <= 2 * g && g <= f + 1 && e <= f + 2
    }

    /// All record invariants, including `e <= q`.
    pub fn is_consistent(&self) -> bool {
        self.frobenius >= -1
            && self.embedding_dim >= 1
            && self.multiplicity >= 1
            && self.embedding_dim <= self.multiplicity
            && self.satisfies_inequalities()
    }
}

impl fmt::Display for InvariantsRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F={} g={} e={} q={}",
            self.frobenius, self.genus, self.embedding_dim, self.multiplicity
        )
    }
}

/// Computes all invariants of `<gens>` through its Apéry table.
///
/// Only generators can be minimal generators, so the embedding dimension is
/// found by testing each generator rather than every Apéry element.
pub fn invariants(gens: &GeneratorSet) -> Result<InvariantsRecord> {
    let ap = apery_set(gens)?;
    Ok(ap.invariants_with_candidates(gens.elements()))
}
