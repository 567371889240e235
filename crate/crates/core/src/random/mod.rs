//! The random numerical semigroup `<A>`, where each positive integer joins
//! `A` independently with probability `p`.
//!
//! `A` is produced lazily by a [`RandomStream`] of geometric gaps, and
//! [`sample_semigroup`] grows the truncation `A ∩ [M]` until it provably
//! generates the same semigroup as all of `A`.

mod sampler;
mod stream;

pub use sampler::{
    initial_truncation, invariants_at_truncation, least_consecutive_pair, sample_semigroup,
    sample_semigroup_with, shifted_sample_semigroup, shifted_sample_semigroup_with, Sample,
    SampleOutcome, SamplerConfig, DEFAULT_CAP, SAMPLE_CSV_HEADER,
};
pub use stream::{derive_seed, geometric_gap, uniform_open, RandomStream, GENERATOR_STREAM};

use crate::error::{Error, Result};

pub(crate) fn check_density(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "density p must lie in (0, 1), got {p}"
        )))
    }
}

/// Formats a real with 17 significant digits, the CSV convention used
/// throughout the crate.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}
