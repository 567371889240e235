//! Small statistics helpers shared by the sampler tests and the studies.

use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Nearest-rank quantile: the `ceil(prob · n)`-th smallest value (1-based),
/// clamped to the first element for `prob = 0`.
pub fn nearest_rank(sorted: &[i64], prob: f64) -> Option<i64> {
    if sorted.is_empty() {
        return None;
    }
    let n = sorted.len();
    let rank = ((prob * n as f64).ceil() as usize).clamp(1, n);
    Some(sorted[rank - 1])
}

/// Pearson statistic `Σ (obs - exp)² / exp`.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Upper-tail probability of the chi-square distribution.
pub fn chi_square_p_value(statistic: f64, dof: u64) -> f64 {
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(statistic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank_definition() {
        let xs = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
        assert_eq!(nearest_rank(&xs, 0.5), Some(5));
        assert_eq!(nearest_rank(&xs, 0.1), Some(1));
        assert_eq!(nearest_rank(&xs, 0.9), Some(9));
        assert_eq!(nearest_rank(&xs, 0.0), Some(1));
        assert_eq!(nearest_rank(&xs, 1.0), Some(10));
        assert_eq!(nearest_rank(&[7], 0.3), Some(7));
        assert_eq!(nearest_rank(&[], 0.3), None);
    }

    #[test]
    fn chi_square_reference_points() {
        // Median of chi-square with 2 dof is 2 ln 2.
        let p = chi_square_p_value(2.0 * std::f64::consts::LN_2, 2);
        assert!((p - 0.5).abs() < 1e-12);
        assert_eq!(chi_square_statistic(&[10, 10], &[10.0, 10.0]), 0.0);
    }
}
