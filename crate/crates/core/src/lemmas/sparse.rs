use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::random::{check_density, RandomStream, GENERATOR_STREAM};
use crate::semigroup::membership::semigroup_prefix_of;

/// Statistics of `|<A> ∩ [N]|` at `N = floor(c · p⁻¹ · ln²(1/p))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseDensityReport {
    pub p: f64,
    pub c: f64,
    pub n: u64,
    pub epsilon: f64,
    pub trials: u64,
    pub mean_count: f64,
    pub max_count: u64,
    pub mean_density: f64,
    /// Fraction of trials with `|<A> ∩ [N]| <= N^ε`.
    pub frac_under: f64,
}

pub(crate) fn scale_n(p: f64, c: f64) -> u64 {
    let l = (1.0 / p).ln();
    (c / p * l * l).floor().max(1.0) as u64
}

/// Per-trial `|<A> ∩ [N]|`, computed from `A ∩ [N]` with the prefix table.
/// Trial `t` uses the same generator stream as the sampler's trial `t`.
pub fn sparse_density_counts(p: f64, c: f64, trials: u64, master_seed: u64) -> Result<(u64, Vec<u64>)> {
    check_density(p)?;
    if !(c > 0.0) {
        return Err(crate::Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    let n = scale_n(p, c);
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut stream = RandomStream::new(p, master_seed, t, GENERATOR_STREAM)?;
            let gens = stream.sample_prefix(n);
            Ok(semigroup_prefix_of(gens, n).count_positive())
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok((n, counts))
}

pub fn sparse_density(
    p: f64,
    c: f64,
    epsilon: f64,
    trials: u64,
    master_seed: u64,
) -> Result<SparseDensityReport> {
    let (n, counts) = sparse_density_counts(p, c, trials, master_seed)?;
    let threshold = (n as f64).powf(epsilon);
    let total: u64 = counts.iter().sum();
    let mean_count = total as f64 / trials as f64;
    Ok(SparseDensityReport {
        p,
        c,
        n,
        epsilon,
        trials,
        mean_count,
        max_count: counts.iter().copied().max().unwrap_or(0),
        mean_density: mean_count / n as f64,
        frac_under: counts.iter().filter(|&&k| k as f64 <= threshold).count() as f64
            / trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_grow_with_c() {
        let grid = [0.01, 0.1, 0.5, 1.0, 3.0];
        let per_c: Vec<Vec<u64>> = grid
            .iter()
            .map(|&c| sparse_density_counts(0.01, c, 30, 4).unwrap().1)
            .collect();
        for w in per_c.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                assert!(a <= b);
            }
        }
    }

    #[test]
    fn far_past_the_transition_is_dense() {
        let r = sparse_density(0.01, 100.0, 0.5, 20, 1).unwrap();
        assert!(r.mean_density > 0.95, "{r:?}");
    }

    #[test]
    fn far_below_the_transition_is_sparse() {
        let r = sparse_density(1e-3, 0.01, 0.5, 200, 2).unwrap();
        assert!(r.frac_under >= 0.9, "{r:?}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(sparse_density(0.0, 1.0, 0.5, 5, 0).is_err());
        assert!(sparse_density(0.1, 0.0, 0.5, 5, 0).is_err());
    }
}
