use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check_density;
use crate::error::{Error, Result};

/// Stream index reserved for the generator set `A` itself. Auxiliary
/// randomness uses other indices so that it never perturbs `A`.
pub const GENERATOR_STREAM: u64 = 0;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream `(master_seed, trial, stream_index)`.
pub fn derive_seed(master_seed: u64, trial: u64, stream_index: u64) -> u64 {
    let h = splitmix(master_seed);
    let h = splitmix(h ^ splitmix(trial ^ 0x5851_f42d_4c95_7f2d));
    splitmix(h ^ splitmix(stream_index ^ 0x1405_7b7e_f767_814f))
}

/// A uniform draw `k · 2^-53` from 53 random bits, with `k = 0` moved to
/// `2^-54`. The result lies in `[2^-54, 1 - 2^-53]`, never on an endpoint.
pub fn uniform_open<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let k = rng.next_u64() >> 11;
    if k == 0 {
        return 0.5 / (1u64 << 53) as f64;
    }
    k as f64 / (1u64 << 53) as f64
}

/// Inverse-CDF draw of a gap between consecutive elements of a Bernoulli(p)
/// set: `floor(ln u / ln(1 - p)) + 1`, so `P[gap = k] = (1-p)^(k-1) p`.
pub fn geometric_gap(u: f64, p: f64) -> Result<u64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "uniform draw must lie in (0, 1), got {u}"
        )));
    }
    check_density(p)?;
    let k = (u.ln() / (-p).ln_1p()).floor();
    // `as` saturates, which only matters for absurdly small p.
    Ok((k as u64).saturating_add(1))
}

/// Lazily generated Bernoulli(p) subset of the positive integers.
///
/// Elements are produced in increasing order and remembered, so asking for
/// a longer prefix extends earlier answers and never redraws them.
#[derive(Clone, Debug)]
pub struct RandomStream {
    p: f64,
    master_seed: u64,
    trial: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
    cursor: u64,
    emitted: Vec<u64>,
}

impl RandomStream {
    pub fn new(p: f64, master_seed: u64, trial: u64, stream_index: u64) -> Result<Self> {
        check_density(p)?;
        Ok(Self {
            p,
            master_seed,
            trial,
            stream_index,
            rng: ChaCha8Rng::seed_from_u64(derive_seed(master_seed, trial, stream_index)),
            cursor: 0,
            emitted: Vec::new(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn trial(&self) -> u64 {
        self.trial
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Last integer emitted so far (0 before the first draw).
    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    fn advance(&mut self) -> u64 {
        let u = uniform_open(&mut self.rng);
        let gap = geometric_gap(u, self.p).expect("u and p validated");
        self.cursor = self.cursor.saturating_add(gap);
        self.emitted.push(self.cursor);
        self.cursor
    }

    /// Generates elements until the stream has passed `m`.
    pub fn extend_to(&mut self, m: u64) {
        while self.cursor <= m && self.cursor != u64::MAX {
            self.advance();
        }
    }

    /// `A ∩ [1, m]`.
    pub fn sample_prefix(&mut self, m: u64) -> &[u64] {
        self.extend_to(m);
        let end = self.emitted.partition_point(|&a| a <= m);
        &self.emitted[..end]
    }
}
