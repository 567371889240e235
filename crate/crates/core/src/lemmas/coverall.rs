use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Mode, COVERAGE_STREAM};
use crate::error::{Error, Result};
use crate::random::derive_seed;

/// A sequence of residues modulo `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueVector {
    q: u64,
    xs: Vec<u64>,
}

impl ResidueVector {
    pub fn new(q: u64, xs: Vec<u64>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        if let Some(bad) = xs.iter().find(|&&x| x >= q) {
            return Err(Error::InvalidParameter(format!(
                "residue {bad} is outside [0, {q})"
            )));
        }
        Ok(Self { q, xs })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn residues(&self) -> &[u64] {
        &self.xs
    }
}

/// Reachability table of `{ε·x : ε ∈ {0,1}^L}` mod `q`, one pass per element.
fn reach_table(q: usize, xs: &[u64]) -> Vec<bool> {
    let mut reach = vec![false; q];
    reach[0] = true;
    let mut next = reach.clone();
    for &x in xs {
        extend(&reach, &mut next, x as usize);
        std::mem::swap(&mut reach, &mut next);
    }
    reach
}

/// `next = reach ∪ (reach + x)`.
fn extend(reach: &[bool], next: &mut [bool], x: usize) {
    let q = reach.len();
    next.copy_from_slice(reach);
    for (r, _) in reach.iter().enumerate().filter(|(_, &hit)| hit) {
        next[(r + x) % q] = true;
    }
}

/// Residues expressible as subset sums of `xs` mod `q`, in increasing order.
/// Always contains 0.
pub fn reachable_residues(xs: &ResidueVector) -> Vec<u64> {
    reach_table(xs.q as usize, &xs.xs)
        .iter()
        .enumerate()
        .filter(|(_, &hit)| hit)
        .map(|(r, _)| r as u64)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverageMode {
    /// All `q^L` sequences.
    Exact,
    /// `trials` independent uniform sequences.
    MonteCarlo { trials: u64, seed: u64 },
}

/// Probability that uniform `x_1..x_L` fail to cover `Z/qZ` by subset sums,
/// alongside the bound `q² · 2^-L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub q: u64,
    #[serde(rename = "L")]
    pub l: u32,
    pub mode: Mode,
    pub samples: u64,
    pub failures: u64,
    pub estimate: f64,
    pub bound: f64,
}

impl CoverageReport {
    /// The bound is informative (below 1) and not exceeded.
    pub fn within_bound(&self) -> bool {
        self.estimate <= self.bound
    }
}

pub fn coverall_failure_probability(
    q: u64,
    l: u32,
    mode: CoverageMode,
    budget: u128,
) -> Result<CoverageReport> {
    if q == 0 || l == 0 {
        return Err(Error::InvalidParameter("q and L must be positive".into()));
    }
    let bound = (q * q) as f64 * 2f64.powi(-(l as i32));
    let (mode, samples, failures) = match mode {
        CoverageMode::Exact => {
            let needed = (q as u128).checked_pow(l).unwrap_or(u128::MAX);
            if needed > budget {
                return Err(Error::BudgetExceeded {
                    check: format!("coverall exact q={q} L={l}"),
                    needed,
                    budget,
                });
            }
            (Mode::Exact, needed as u64, exact_failures(q as usize, l as usize))
        }
        CoverageMode::MonteCarlo { trials, seed } => {
            if trials as u128 > budget {
                return Err(Error::BudgetExceeded {
                    check: format!("coverall monte carlo q={q} L={l}"),
                    needed: trials as u128,
                    budget,
                });
            }
            let failures = (0..trials)
                .into_par_iter()
                .filter(|&t| !random_sequence_covers(q, l, seed, t))
                .count() as u64;
            (Mode::MonteCarlo, trials, failures)
        }
    };
    Ok(CoverageReport {
        q,
        l,
        mode,
        samples,
        failures,
        estimate: failures as f64 / samples as f64,
        bound,
    })
}

/// Counts non-covering sequences among all `q^L`, sharing reachability
/// tables between sequences with a common prefix.
fn exact_failures(q: usize, l: usize) -> u64 {
    let mut levels: Vec<Vec<bool>> = vec![vec![false; q]; l + 1];
    levels[0][0] = true;

    fn walk(levels: &mut [Vec<bool>], depth: usize, q: usize) -> u64 {
        if depth + 1 == levels.len() {
            return u64::from(!levels[depth].iter().all(|&b| b));
        }
        let mut failures = 0;
        for x in 0..q {
            let (head, tail) = levels.split_at_mut(depth + 1);
            extend(&head[depth], &mut tail[0], x);
            failures += walk(levels, depth + 1, q);
        }
        failures
    }

    walk(&mut levels, 0, q)
}

fn random_sequence_covers(q: u64, l: u32, seed: u64, trial: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial, COVERAGE_STREAM));
    let qs = q as usize;
    let mut reach = vec![false; qs];
    reach[0] = true;
    let mut next = reach.clone();
    let mut covered = 1;
    for _ in 0..l {
        let x = rng.gen_range(0..q) as usize;
        extend(&reach, &mut next, x);
        std::mem::swap(&mut reach, &mut next);
        covered = reach.iter().filter(|&&b| b).count();
        if covered == qs {
            break;
        }
    }
    covered == qs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reach(q: u64, xs: &[u64]) -> Vec<u64> {
        reachable_residues(&ResidueVector::new(q, xs.to_vec()).unwrap())
    }

    /// All 2^L subset sums, one by one.
    fn brute(q: u64, xs: &[u64]) -> Vec<u64> {
        let mut hit = vec![false; q as usize];
        for mask in 0u32..(1 << xs.len()) {
            let s: u64 = (0..xs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| xs[i])
                .sum();
            hit[(s % q) as usize] = true;
        }
        (0..q).filter(|&r| hit[r as usize]).collect()
    }

    #[test]
    fn reachable_examples() {
        assert_eq!(reach(5, &[1]), vec![0, 1]);
        assert_eq!(reach(4, &[1, 2]), vec![0, 1, 2, 3]);
        assert_eq!(reach(6, &[2, 4]), vec![0, 2, 4]);
        assert_eq!(reach(7, &[]), vec![0]);
    }

    #[test]
    fn residue_vector_validates() {
        assert!(ResidueVector::new(5, vec![5]).is_err());
        assert!(ResidueVector::new(0, vec![]).is_err());
    }

    #[test]
    fn exact_small_cases() {
        let r = coverall_failure_probability(2, 1, CoverageMode::Exact, 1 << 20).unwrap();
        assert_eq!((r.samples, r.failures), (2, 1));
        assert_eq!(r.estimate, 0.5);
        assert_eq!(r.bound, 2.0);

        let r = coverall_failure_probability(2, 2, CoverageMode::Exact, 1 << 20).unwrap();
        assert_eq!((r.samples, r.failures), (4, 1));
        assert_eq!(r.estimate, 0.25);
    }

    #[test]
    fn exact_matches_brute_force_count() {
        for (q, l) in [(3u64, 4u32), (4, 3), (5, 3), (6, 3)] {
            let mut failures = 0;
            let total = q.pow(l);
            for code in 0..total {
                let xs: Vec<u64> = (0..l).map(|i| code / q.pow(i) % q).collect();
                if brute(q, &xs).len() as u64 != q {
                    failures += 1;
                }
            }
            let r = coverall_failure_probability(q, l, CoverageMode::Exact, u128::MAX).unwrap();
            assert_eq!(r.failures, failures, "q={q} L={l}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = coverall_failure_probability(3, 10, CoverageMode::Exact, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 59049, .. }));
        let mc = CoverageMode::MonteCarlo { trials: 10, seed: 0 };
        assert!(coverall_failure_probability(3, 10, mc, 9).is_err());
    }

    #[test]
    fn json_keys() {
        let r = coverall_failure_probability(2, 2, CoverageMode::Exact, 100).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["L", "bound", "estimate", "failures", "mode", "q", "samples"]
        );
        assert_eq!(v["mode"], "exact");
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let mc = CoverageMode::MonteCarlo { trials: 2000, seed: 9 };
        let a = coverall_failure_probability(7, 4, mc, u128::MAX).unwrap();
        let b = coverall_failure_probability(7, 4, mc, u128::MAX).unwrap();
        assert_eq!(a, b);
        assert!(a.failures > 0);
    }

    proptest! {
        #[test]
        fn matches_subset_enumeration(q in 1u64..40, raw in proptest::collection::vec(0u64..1000, 0..9)) {
            let xs: Vec<u64> = raw.iter().map(|x| x % q).collect();
            prop_assert_eq!(reach(q, &xs), brute(q, &xs));
        }

        #[test]
        fn monotone_and_coset_union(q in 1u64..40, raw in proptest::collection::vec(0u64..1000, 1..8), extra in 0u64..1000) {
            let xs: Vec<u64> = raw.iter().map(|x| x % q).collect();
            let before = reach(q, &xs);
            let mut longer = xs.clone();
            longer.push(extra % q);
            let after = reach(q, &longer);
            prop_assert!(before.iter().all(|r| after.contains(r)));

            // Every reachable residue lies in the subgroup generated by xs
            // and q, i.e. is a multiple of d = gcd(xs, q).
            let d = xs.iter().fold(q, |g, &x| crate::semigroup::gcd(g, x));
            prop_assert!(before.iter().all(|r| r % d == 0));
        }
    }
}
