use serde::{Deserialize, Serialize};

use super::{check_density, fmt_real, RandomStream, GENERATOR_STREAM};
use crate::error::{Error, Result};
use crate::semigroup::{
    apery_set, frobenius, genus, membership::semigroup_prefix_of, AperyTable, GeneratorSet,
    InvariantsRecord,
};

/// Largest truncation point the sampler will try.
pub const DEFAULT_CAP: u64 = 1 << 30;

pub const SAMPLE_CSV_HEADER: [&str; 8] = ["trial_id", "p", "M", "F", "g", "e", "q", "count_elements"];

/// `ceil(8 · p⁻¹ · max(1, ln²(1/p)))`.
pub fn initial_truncation(p: f64) -> u64 {
    let l = (1.0 / p).ln();
    (8.0 / p * (l * l).max(1.0)).ceil() as u64
}

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    /// Truncation points above this fail with `SamplerDidNotConverge`.
    pub cap: u64,
    /// Recompute F and g from a membership table on every n-th trial id
    /// (0 disables the check). Only applied when `M <= cross_check_limit`.
    pub cross_check_every: u64,
    pub cross_check_limit: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            cross_check_every: 16,
            cross_check_limit: 1 << 24,
        }
    }
}

/// One draw of the random model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub p: f64,
    pub trial_id: u64,
    /// Least integer of the ground set: 1 for the plain model, `u` for
    /// `A ∩ [u, ∞)`.
    pub ground_start: u64,
    pub truncation_m: u64,
    /// `A ∩ [ground_start, M]`.
    pub elements: Vec<u64>,
    pub invariants: InvariantsRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_in_n: Option<u64>,
}

impl SampleOutcome {
    pub fn csv_record(&self) -> [String; 8] {
        let inv = &self.invariants;
        [
            self.trial_id.to_string(),
            fmt_real(self.p),
            self.truncation_m.to_string(),
            inv.frobenius.to_string(),
            inv.genus.to_string(),
            inv.embedding_dim.to_string(),
            inv.multiplicity.to_string(),
            self.elements.len().to_string(),
        ]
    }

    /// Checks the stopping certificate, the gcd and the recorded invariants
    /// against a fresh computation.
    pub fn verify(&self) -> Result<()> {
        if self.invariants.frobenius >= self.truncation_m as i64 {
            return Err(Error::InvariantViolation(format!(
                "trial {}: F = {} is not below M = {}",
                self.trial_id, self.invariants.frobenius, self.truncation_m
            )));
        }
        let gens = GeneratorSet::from_sorted(self.elements.clone())?;
        let recomputed = crate::semigroup::invariants(&gens)?;
        if recomputed != self.invariants {
            return Err(Error::InvariantViolation(format!(
                "trial {}: recorded {} but recomputed {}",
                self.trial_id, self.invariants, recomputed
            )));
        }
        Ok(())
    }
}

/// A draw together with its Apéry table, for callers that need membership
/// queries on the sampled semigroup.
#[derive(Clone, Debug)]
pub struct Sample {
    pub outcome: SampleOutcome,
    pub apery: AperyTable,
}

/// Draws `<A>` for one trial with the default configuration.
pub fn sample_semigroup(p: f64, trial: u64, master_seed: u64) -> Result<SampleOutcome> {
    sample_semigroup_with(&SamplerConfig::default(), p, trial, master_seed).map(|s| s.outcome)
}

pub fn sample_semigroup_with(
    config: &SamplerConfig,
    p: f64,
    trial: u64,
    master_seed: u64,
) -> Result<Sample> {
    sample_from(config, p, 1, trial, master_seed)
}

/// Draws `<A ∩ [u, ∞)>` with `u >= 2` even.
///
/// The ground set is the same stream as [`sample_semigroup`] with elements
/// below `u` dropped, so for a fixed trial the shifted semigroup is a subset
/// of the unshifted one.
pub fn shifted_sample_semigroup(
    p: f64,
    u: u64,
    trial: u64,
    master_seed: u64,
) -> Result<SampleOutcome> {
    shifted_sample_semigroup_with(&SamplerConfig::default(), p, u, trial, master_seed)
        .map(|s| s.outcome)
}

pub fn shifted_sample_semigroup_with(
    config: &SamplerConfig,
    p: f64,
    u: u64,
    trial: u64,
    master_seed: u64,
) -> Result<Sample> {
    if u < 2 || u % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "shift u must be an even integer >= 2, got {u}"
        )));
    }
    sample_from(config, p, u, trial, master_seed)
}

/// Grows `M` by doubling until `gcd(A ∩ [M]) = 1` and `F(<A ∩ [M]>) < M`.
/// Every element of `A` beyond `M` then exceeds `F` and already lies in the
/// semigroup, so the truncation generates exactly `<A>`.
fn sample_from(
    config: &SamplerConfig,
    p: f64,
    ground_start: u64,
    trial: u64,
    master_seed: u64,
) -> Result<Sample> {
    check_density(p)?;
    let mut stream = RandomStream::new(p, master_seed, trial, GENERATOR_STREAM)?;
    let mut m = initial_truncation(p)
        .max(2 * ground_start)
        .min(config.cap);
    loop {
        let elements: Vec<u64> = stream
            .sample_prefix(m)
            .iter()
            .copied()
            .filter(|&a| a >= ground_start)
            .collect();
        if !elements.is_empty() {
            let gens = GeneratorSet::from_sorted(elements)?;
            if gens.is_cofinite() {
                let ap = apery_set(&gens)?;
                if frobenius(&ap) < m as i64 {
                    let invariants = ap.invariants_with_candidates(gens.elements());
                    if config.cross_check_every > 0
                        && trial % config.cross_check_every == 0
                        && m <= config.cross_check_limit
                    {
                        cross_check(&gens, &ap, m, trial)?;
                    }
                    let outcome = SampleOutcome {
                        p,
                        trial_id: trial,
                        ground_start,
                        truncation_m: m,
                        elements: gens.elements().to_vec(),
                        invariants,
                        count_in_n: None,
                    };
                    return Ok(Sample { outcome, apery: ap });
                }
            }
        }
        if m >= config.cap {
            return Err(Error::SamplerDidNotConverge {
                p,
                trial,
                cap: config.cap,
            });
        }
        m = (m * 2).min(config.cap);
    }
}

fn cross_check(gens: &GeneratorSet, ap: &AperyTable, m: u64, trial: u64) -> Result<()> {
    let table = semigroup_prefix_of(gens.elements(), m);
    let f = table.largest_gap().map_or(-1, |g| g as i64);
    let g = table.gap_count();
    if f != frobenius(ap) || g != genus(ap) {
        return Err(Error::InvariantViolation(format!(
            "trial {trial}: Apéry path gives F={} g={}, membership table gives F={f} g={g}",
            frobenius(ap),
            genus(ap)
        )));
    }
    Ok(())
}

/// Invariants of `<A ∩ [m]>` for the trial's stream at a forced truncation.
pub fn invariants_at_truncation(
    p: f64,
    trial: u64,
    master_seed: u64,
    m: u64,
) -> Result<InvariantsRecord> {
    let mut stream = RandomStream::new(p, master_seed, trial, GENERATOR_STREAM)?;
    let gens = GeneratorSet::from_sorted(stream.sample_prefix(m).to_vec())?;
    crate::semigroup::invariants(&gens)
}

/// Least `v` with `2v >= u` and both `2v, 2v + 1` in the trial's `A`.
/// Since `<2v, 2v+1>` has Frobenius number `2v(2v+1) - (4v+1)`, this bounds
/// `F(<A ∩ [u, ∞)>)` from above.
pub fn least_consecutive_pair(p: f64, u: u64, trial: u64, master_seed: u64) -> Result<u64> {
    let mut stream = RandomStream::new(p, master_seed, trial, GENERATOR_STREAM)?;
    let mut m = initial_truncation(p).max(2 * u);
    loop {
        let elems = stream.sample_prefix(m);
        let found = elems
            .windows(2)
            .find(|w| w[0] >= u && w[0] % 2 == 0 && w[1] == w[0] + 1);
        if let Some(w) = found {
            return Ok(w[0] / 2);
        }
        if m >= DEFAULT_CAP {
            return Err(Error::SamplerDidNotConverge {
                p,
                trial,
                cap: DEFAULT_CAP,
            });
        }
        m = (m * 2).min(DEFAULT_CAP);
    }
}
