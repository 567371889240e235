//! Exact and Monte Carlo checks of the combinatorial and probabilistic facts
//! behind the scaling law: partition asymptotics, the partition-based
//! sparseness bound, modular subset-sum coverage and distinct resampling.

mod coverall;
mod partitions;
mod resample;
mod sparse;

use serde::{Deserialize, Serialize};

pub use coverall::{
    coverall_failure_probability, reachable_residues, CoverageMode, CoverageReport, ResidueVector,
};
pub use partitions::{
    calibrate_partition_constant, extremal_prefix_count, extremal_prefix_counts, extremal_set, hardy_ramanujan_estimate,
    partition_count, partition_counts, partition_sum_bound, partition_sums_f64,
};
pub use resample::{
    resample_distribution_check, resample_sequence, ExactDistribution, ResampleCase, ResampleMode,
    ResampleReport,
};
pub use sparse::{sparse_density, sparse_density_counts, SparseDensityReport};

/// Stream indices for auxiliary randomness; disjoint from the generator
/// stream so lemma checks never disturb sampled semigroups.
pub const COVERAGE_STREAM: u64 = 101;
pub const RESAMPLE_STREAM: u64 = 102;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}
