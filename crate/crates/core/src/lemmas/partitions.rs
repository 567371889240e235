use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::semigroup::membership::semigroup_prefix_of;

/// `Part(0), ..., Part(n)` by Euler's pentagonal number recurrence,
/// `O(n^1.5)` big-integer additions.
pub fn partition_counts(n: usize) -> Vec<BigUint> {
    let mut table: Vec<BigInt> = Vec::with_capacity(n + 1);
    table.push(BigInt::from(1u32));
    for i in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = table[i - g1].clone();
            if g2 <= i {
                term += &table[i - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        table.push(acc);
    }
    table
        .into_iter()
        .map(|v| v.to_biguint().expect("partition counts are nonnegative"))
        .collect()
}

/// Number of partitions of `n`.
pub fn partition_count(n: usize) -> BigUint {
    partition_counts(n).pop().expect("table has n + 1 entries")
}

/// Leading term `exp(π √(2n/3)) / (4√3 · n)`.
pub fn hardy_ramanujan_estimate(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("estimate needs n >= 1".into()));
    }
    let n = n as f64;
    Ok((std::f64::consts::PI * (2.0 * n / 3.0).sqrt()).exp() / (4.0 * 3f64.sqrt() * n))
}

/// `C · (γN)^(-1/2) · exp(π √(2γN/3))`, the bound on `|<A₀> ∩ [N]|` for any
/// `A₀` with `|A₀ ∩ [n]| <= γn` for all `n`.
pub fn partition_sum_bound(gamma: f64, n: u64, c: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in (0, 1], got {gamma}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("C must be positive, got {c}")));
    }
    let x = gamma * n as f64;
    Ok(c / x.sqrt() * (std::f64::consts::PI * (2.0 * x / 3.0).sqrt()).exp())
}

/// `Σ_{n <= m} Part(n)` for every `m <= max_m`, as floats.
pub fn partition_sums_f64(max_m: usize) -> Vec<f64> {
    let mut acc = BigUint::zero();
    partition_counts(max_m)
        .into_iter()
        .map(|p| {
            acc += p;
            acc.to_f64().expect("finite for the ranges used here")
        })
        .collect()
}

/// Smallest power of two `C` such that `Σ_{n <= m} Part(n)` is at most the
/// bound at `γN = m` for every integer `1 <= m <= max_m`.
pub fn calibrate_partition_constant(max_m: usize) -> f64 {
    let sums = partition_sums_f64(max_m);
    let worst = (1..=max_m)
        .map(|m| sums[m] / partition_sum_bound(1.0, m as u64, 1.0).expect("valid arguments"))
        .fold(0.0f64, f64::max);
    let mut c = 2f64.powi(-30);
    while c < worst {
        c *= 2.0;
    }
    c
}

/// `A₀ ∩ [N]` for the extremal set `A₀ = {ceil(i/γ) : i >= 1}`.
pub fn extremal_set(gamma: f64, n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for i in 1u64.. {
        let x = i as f64 / gamma;
        // i/γ is often an integer in exact arithmetic (γ = 0.1, 0.2) but lands
        // a hair above it in floating point.
        let r = x.round();
        let a = if (x - r).abs() <= 1e-9 * x { r } else { x.ceil() } as u64;
        if a > n {
            break;
        }
        out.push(a);
    }
    out
}

/// `|<A₀> ∩ [N]|` for the extremal set, measured with the prefix table.
pub fn extremal_prefix_count(gamma: f64, n: u64) -> u64 {
    semigroup_prefix_of(&extremal_set(gamma, n), n).count_positive()
}

/// `|<A₀> ∩ [N]|` for every `N <= n_max` from a single prefix table; entry
/// `N` is the count for `N` (entry 0 is 0).
pub fn extremal_prefix_counts(gamma: f64, n_max: u64) -> Vec<u64> {
    let table = semigroup_prefix_of(&extremal_set(gamma, n_max), n_max);
    let mut acc = 0;
    (0..=n_max)
        .map(|n| {
            if n > 0 && table.member(n) {
                acc += 1;
            }
            acc
        })
        .collect()
}
