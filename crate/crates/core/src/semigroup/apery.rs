use serde::{Deserialize, Serialize};

use super::{gcd, GeneratorSet, InvariantsRecord, MAX_GENERATOR};
use crate::error::{Error, Result};

/// Apéry set of `S = <A>` with respect to its multiplicity `q = min(A)`.
///
/// `w[r]` is the least element of `S` congruent to `r` mod `q`, so `n` is in
/// `S` exactly when `n >= w[n mod q]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AperyTable {
    q: u64,
    w: Vec<u64>,
}

impl AperyTable {
    pub fn multiplicity(&self) -> u64 {
        self.q
    }

    pub fn elements(&self) -> &[u64] {
        &self.w
    }

    /// `|S ∩ [1, n]|`.
    pub fn count_up_to(&self, n: u64) -> u64 {
        let q = self.q;
        let in_classes: u64 = self
            .w
            .iter()
            .filter(|&&w| w <= n)
            .map(|&w| (n - w) / q + 1)
            .sum();
        in_classes - 1
    }

    /// True when the Apéry element `w[r]` (r != 0) is not a sum of two nonzero
    /// semigroup elements.
    ///
    /// Any decomposition `w[r] = s1 + s2` can be pushed down to
    /// `w[r1] + w[r - r1]` with `r1 ∉ {0, r}`, so one pass over the residues
    /// decides it.
    fn is_minimal_apery(&self, r: usize) -> bool {
        let q = self.w.len();
        let target = self.w[r];
        (1..q).filter(|&r1| r1 != r).all(|r1| {
            let w1 = self.w[r1];
            w1 >= target || w1 + self.w[(r + q - r1) % q] != target
        })
    }

    /// Invariants where the minimal generators are searched among
    /// `candidates` only. Sound whenever the candidates generate `S`.
    pub(crate) fn invariants_with_candidates(&self, candidates: &[u64]) -> InvariantsRecord {
        let q = self.q;
        let others = candidates
            .iter()
            .filter(|&&a| a != q)
            .filter(|&&a| {
                let r = (a % q) as usize;
                r != 0 && self.w[r] == a && self.is_minimal_apery(r)
            })
            .count() as u64;
        InvariantsRecord {
            frobenius: frobenius(self),
            genus: genus(self),
            embedding_dim: 1 + others,
            multiplicity: q,
        }
    }
}

/// Computes the Apéry table of `<gens>` with respect to `min(gens)`.
///
/// Round-robin relaxation: for each generator `a`, the residues mod `q` split
/// into `gcd(a, q)` cycles under `r -> r + a`. Walking each cycle once from
/// its current minimum and relaxing `w[r + a] <= w[r] + a` leaves every
/// entry optimal for the generators seen so far, so one walk per generator
/// suffices and the total cost is `O(q · |gens|)`.
pub fn apery_set(gens: &GeneratorSet) -> Result<AperyTable> {
    if !gens.is_cofinite() {
        return Err(Error::NotCofinite { gcd: gens.gcd() });
    }
    if gens.max() > MAX_GENERATOR {
        return Err(Error::TooLarge { value: gens.max() });
    }
    let q = gens.min();
    let qs = q as usize;
    let mut w = vec![u64::MAX; qs];
    w[0] = 0;

    for &a in &gens.elements()[1..] {
        let d = gcd(a, q);
        let step = (a % q) as usize;
        let cycle_len = qs / d as usize;
        for start in 0..d as usize {
            let mut r = start;
            let mut best = u64::MAX;
            for _ in 0..cycle_len {
                best = best.min(w[r]);
                r = (r + step) % qs;
            }
            if best == u64::MAX {
                continue;
            }
            for _ in 0..cycle_len {
                best += a;
                let r = (best % q) as usize;
                best = best.min(w[r]);
                w[r] = best;
            }
        }
    }
    debug_assert!(w.iter().all(|&x| x != u64::MAX));
    Ok(AperyTable { q, w })
}

/// Largest gap, `max w[r] - q`; `-1` when the semigroup is all of `Z>=0`.
pub fn frobenius(ap: &AperyTable) -> i64 {
    let max = ap.w.iter().copied().max().unwrap_or(0);
    max as i64 - ap.q as i64
}

/// Number of gaps. Residue class `r` contributes `(w[r] - r) / q` gaps, which
/// sums to `(Σ w[r]) / q - (q - 1) / 2`.
pub fn genus(ap: &AperyTable) -> u64 {
    ap.w
        .iter()
        .enumerate()
        .map(|(r, &w)| (w - r as u64) / ap.q)
        .sum()
}

pub fn membership(ap: &AperyTable, n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let n = n as u64;
    n >= ap.w[(n % ap.q) as usize]
}

/// The unique minimal generating set, in increasing order.
///
/// Every minimal generator other than `q` is an Apéry element; this tests each
/// of them, `O(q²)` overall. [`super::invariants`] restricts the search to the
/// given generators instead.
pub fn minimal_generators(ap: &AperyTable) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::once(ap.q)
        .chain(
            (1..ap.w.len())
                .filter(|&r| ap.is_minimal_apery(r))
                .map(|r| ap.w[r]),
        )
        .collect();
    out.sort_unstable();
    out
}
