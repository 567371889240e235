use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::lemmas::{
    calibrate_partition_constant, coverall_failure_probability, extremal_prefix_counts,
    hardy_ramanujan_estimate, partition_counts, partition_sum_bound, partition_sums_f64,
    resample_distribution_check, CoverageMode, ResampleMode,
};

/// Default per-check case budget; every mandatory check fits well inside it.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub cases: u128,
    pub pass: bool,
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaSuiteReport {
    pub budget: u128,
    pub pass: bool,
    pub checks: Vec<LemmaCheck>,
}

type CheckFn = fn(u128) -> Result<LemmaCheck>;

/// The registered exact checks, in report order.
const CHECKS: &[(&str, CheckFn)] = &[
    ("partition_enumeration", partition_enumeration),
    ("partition_asymptotics", partition_asymptotics),
    ("partition_sum_bound", partition_bound),
    ("coverall_exact_values", coverall_values),
    ("coverall_exact_grid", coverall_grid),
    ("resample_exact_uniform", resample_exact),
];

/// Runs every registered check within `budget` cases each. A check that
/// would need more fails the whole suite with `BudgetExceeded`.
pub fn run_lemma_suite(budget: u128) -> Result<LemmaSuiteReport> {
    let checks = CHECKS
        .iter()
        .map(|(_, check)| check(budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(LemmaSuiteReport {
        budget,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

pub(crate) fn registered_checks() -> usize {
    CHECKS.len()
}

fn charge(name: &str, needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded {
            check: name.to_string(),
            needed,
            budget,
        });
    }
    Ok(())
}

/// Partitions of `n` with parts at most `max`, listed one at a time.
fn enumerate_partitions(n: usize, max: usize) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=max.min(n))
        .map(|k| enumerate_partitions(n - k, k))
        .sum()
}

fn partition_enumeration(budget: u128) -> Result<LemmaCheck> {
    const N: usize = 30;
    let table = partition_counts(N);
    let needed: u128 = table.iter().map(|p| u128::try_from(p).unwrap_or(u128::MAX)).sum();
    charge("partition_enumeration", needed, budget)?;
    let mismatches: Vec<usize> = (0..=N)
        .filter(|&n| table[n] != BigUint::from(enumerate_partitions(n, n)))
        .collect();
    Ok(LemmaCheck {
        name: "partition_enumeration".into(),
        cases: needed,
        pass: mismatches.is_empty(),
        detail: json!({ "max_n": N, "mismatches": mismatches }),
    })
}

fn partition_asymptotics(budget: u128) -> Result<LemmaCheck> {
    const GRID: [usize; 3] = [1000, 2000, 5000];
    let needed = GRID[2] as u128;
    charge("partition_asymptotics", needed, budget)?;
    let table = partition_counts(GRID[2]);
    let ratios: Vec<f64> = GRID
        .iter()
        .map(|&n| {
            let exact: f64 = num_traits::ToPrimitive::to_f64(&table[n]).unwrap_or(f64::INFINITY);
            exact / hardy_ramanujan_estimate(n as u64).expect("n >= 1")
        })
        .collect();
    let in_band = ratios.iter().all(|r| (0.9..=1.1).contains(r));
    let shrinking = ratios
        .windows(2)
        .all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs());
    Ok(LemmaCheck {
        name: "partition_asymptotics".into(),
        cases: needed,
        pass: in_band && shrinking,
        detail: json!({ "n": GRID, "ratio": ratios }),
    })
}

fn partition_bound(budget: u128) -> Result<LemmaCheck> {
    const MAX_M: usize = 500;
    const MAX_N: u64 = 2000;
    const GAMMAS: [f64; 2] = [0.1, 0.2];
    let needed = MAX_M as u128 + GAMMAS.len() as u128 * MAX_N as u128;
    charge("partition_sum_bound", needed, budget)?;

    let c = calibrate_partition_constant(MAX_M);
    let sums = partition_sums_f64(MAX_M);
    let sum_failures = (1..=MAX_M)
        .filter(|&m| sums[m] > partition_sum_bound(1.0, m as u64, c).expect("valid"))
        .count();
    let mut extremal_failures = 0;
    let mut worst_ratio = 0f64;
    for gamma in GAMMAS {
        let counts = extremal_prefix_counts(gamma, MAX_N);
        for n in 1..=MAX_N {
            let bound = partition_sum_bound(gamma, n, c).expect("valid");
            let measured = counts[n as usize] as f64;
            worst_ratio = worst_ratio.max(measured / bound);
            extremal_failures += usize::from(measured > bound);
        }
    }
    Ok(LemmaCheck {
        name: "partition_sum_bound".into(),
        cases: needed,
        pass: sum_failures == 0 && extremal_failures == 0,
        detail: json!({
            "calibrated_C": c,
            "partial_sum_failures": sum_failures,
            "extremal_failures": extremal_failures,
            "worst_extremal_ratio": worst_ratio,
        }),
    })
}

fn coverall_values(budget: u128) -> Result<LemmaCheck> {
    let cases = [(2u64, 1u32), (2, 2), (3, 10)];
    let needed: u128 = cases.iter().map(|&(q, l)| (q as u128).pow(l)).sum();
    charge("coverall_exact_values", needed, budget)?;
    let reports = cases
        .iter()
        .map(|&(q, l)| coverall_failure_probability(q, l, CoverageMode::Exact, budget))
        .collect::<Result<Vec<_>>>()?;
    let pass = reports[0].failures * 2 == reports[0].samples
        && reports[1].failures * 4 == reports[1].samples
        && reports[2].estimate <= reports[2].bound;
    Ok(LemmaCheck {
        name: "coverall_exact_values".into(),
        cases: needed,
        pass,
        detail: serde_json::to_value(&reports)?,
    })
}

/// `(q, L)` with `2 <= q <= 5`, `q^L <= 10^6` and `q² 2^-L < 1`.
fn coverall_grid_cases() -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for q in 2u64..=5 {
        for l in 1u32.. {
            let total = q.pow(l);
            if total > 1_000_000 {
                break;
            }
            if (q * q) as f64 * 2f64.powi(-(l as i32)) < 1.0 {
                out.push((q, l));
            }
        }
    }
    out
}

fn coverall_grid(budget: u128) -> Result<LemmaCheck> {
    let cases = coverall_grid_cases();
    let needed: u128 = cases.iter().map(|&(q, l)| (q as u128).pow(l)).sum();
    charge("coverall_exact_grid", needed, budget)?;
    let mut violations = Vec::new();
    for &(q, l) in &cases {
        let r = coverall_failure_probability(q, l, CoverageMode::Exact, budget)?;
        if !r.within_bound() {
            violations.push(json!({ "q": q, "L": l, "estimate": r.estimate, "bound": r.bound }));
        }
    }
    Ok(LemmaCheck {
        name: "coverall_exact_grid".into(),
        cases: needed,
        pass: violations.is_empty(),
        detail: json!({ "pairs": cases.len(), "violations": violations }),
    })
}

fn resample_exact(budget: u128) -> Result<LemmaCheck> {
    let mut cases = Vec::new();
    for q in 1u64..=4 {
        for l in 1u32..=3.min(q as u32) {
            cases.push((q, l));
        }
    }
    let needed: u128 = cases
        .iter()
        .map(|&(q, l)| {
            let falling: u128 = (0..l as u64).map(|i| (q - i) as u128).product();
            let fact: u128 = (1..=l as u128).product();
            falling * (q as u128).pow(l) * fact
        })
        .sum();
    charge("resample_exact_uniform", needed, budget)?;
    let mut non_uniform = Vec::new();
    for &(q, l) in &cases {
        let r = resample_distribution_check(q, l, ResampleMode::Exact, budget)?;
        if !r.pass {
            non_uniform.push(json!({ "q": q, "l": l }));
        }
    }
    Ok(LemmaCheck {
        name: "resample_exact_uniform".into(),
        cases: needed,
        pass: non_uniform.is_empty(),
        detail: json!({ "pairs": cases.len(), "non_uniform": non_uniform }),
    })
}
