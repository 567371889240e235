use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Mode, RESAMPLE_STREAM};
use crate::error::{Error, Result};
use crate::random::derive_seed;
use crate::stats::{chi_square_p_value, chi_square_statistic};

/// One run of the distinct-resample procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResampleCase {
    pub q: u64,
    pub ys: Vec<u64>,
    pub zs: Vec<u64>,
    pub xs: Vec<u64>,
}

impl ResampleCase {
    /// Outputs come from `{ys}` and share the equality pattern of `zs`.
    pub fn is_valid(&self) -> bool {
        let l = self.ys.len();
        self.zs.len() == l
            && self.xs.len() == l
            && self.xs.iter().all(|x| self.ys.contains(x))
            && (0..l).all(|i| (0..l).all(|j| (self.xs[i] == self.xs[j]) == (self.zs[i] == self.zs[j])))
    }
}

/// Block index of each position when `[ℓ]` is partitioned by equality of
/// `zs`; blocks are numbered by first occurrence.
fn blocks_of(zs: &[u64]) -> (Vec<usize>, usize) {
    let mut firsts: Vec<u64> = Vec::new();
    let labels = zs
        .iter()
        .map(|z| match firsts.iter().position(|f| f == z) {
            Some(b) => b,
            None => {
                firsts.push(*z);
                firsts.len() - 1
            }
        })
        .collect();
    (labels, firsts.len())
}

fn validate(q: u64, ys: &[u64], zs: &[u64]) -> Result<()> {
    if ys.len() != zs.len() {
        return Err(Error::InvalidParameter(format!(
            "ys has length {} but zs has length {}",
            ys.len(),
            zs.len()
        )));
    }
    if ys.len() as u64 > q {
        return Err(Error::InvalidParameter(format!(
            "length {} exceeds modulus {q}",
            ys.len()
        )));
    }
    if ys.iter().chain(zs).any(|&v| v >= q) {
        return Err(Error::InvalidParameter(format!("residue outside [0, {q})")));
    }
    for (i, y) in ys.iter().enumerate() {
        if ys[..i].contains(y) {
            return Err(Error::InvalidParameter(format!("ys repeats {y}")));
        }
    }
    Ok(())
}

/// Assigns each equality block of `zs` a distinct value of `ys` through a
/// uniformly random injective map.
pub fn resample_sequence<R: Rng + ?Sized>(
    q: u64,
    ys: &[u64],
    zs: &[u64],
    rng: &mut R,
) -> Result<Vec<u64>> {
    validate(q, ys, zs)?;
    let (labels, _) = blocks_of(zs);
    let mut pool = ys.to_vec();
    pool.shuffle(rng);
    Ok(labels.into_iter().map(|b| pool[b]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResampleMode {
    /// Every `(ys, zs, map)` triple, weighted exactly.
    Exact,
    /// `draws` independent runs, tested by chi-square at `significance`.
    MonteCarlo {
        draws: u64,
        seed: u64,
        significance: f64,
    },
}

/// Exact output distribution over `(Z/qZ)^ℓ`: cell `i` (base-`q` digits of
/// `i`, least significant first) has probability `numerators[i] / denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub denominator: u128,
    pub numerators: Vec<u128>,
}

impl ExactDistribution {
    /// Largest `|numerator - denominator / q^ℓ|` over all cells, over the
    /// common denominator.
    pub fn max_deviation_numerator(&self) -> u128 {
        let cells = self.numerators.len() as u128;
        let target = self.denominator / cells;
        self.numerators
            .iter()
            .map(|&n| n.abs_diff(target))
            .max()
            .unwrap_or(0)
    }

    pub fn is_uniform(&self) -> bool {
        let cells = self.numerators.len() as u128;
        self.denominator % cells == 0 && self.max_deviation_numerator() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResampleReport {
    pub q: u64,
    #[serde(rename = "l")]
    pub l: u32,
    pub mode: Mode,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactDistribution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_square: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    pub pass: bool,
}

fn falling(q: u64, l: u32) -> u128 {
    (0..l as u64).map(|i| (q - i) as u128).product()
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

pub fn resample_distribution_check(
    q: u64,
    l: u32,
    mode: ResampleMode,
    budget: u128,
) -> Result<ResampleReport> {
    if q == 0 || l == 0 || l as u64 > q {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= l <= q, got q={q} l={l}"
        )));
    }
    let cells = (q as u128)
        .checked_pow(l)
        .filter(|&c| c <= u32::MAX as u128)
        .ok_or_else(|| Error::InvalidParameter(format!("q^l too large for q={q} l={l}")))?;
    match mode {
        ResampleMode::Exact => {
            let needed = falling(q, l) * cells * factorial(l as u64);
            if needed > budget {
                return Err(Error::BudgetExceeded {
                    check: format!("resample exact q={q} l={l}"),
                    needed,
                    budget,
                });
            }
            let dist = exact_distribution(q, l as usize);
            Ok(ResampleReport {
                q,
                l,
                mode: Mode::Exact,
                samples: needed as u64,
                pass: dist.is_uniform(),
                exact: Some(dist),
                chi_square: None,
                p_value: None,
            })
        }
        ResampleMode::MonteCarlo {
            draws,
            seed,
            significance,
        } => {
            if draws as u128 > budget {
                return Err(Error::BudgetExceeded {
                    check: format!("resample monte carlo q={q} l={l}"),
                    needed: draws as u128,
                    budget,
                });
            }
            let hist = monte_carlo_histogram(q, l as usize, draws, seed, cells as usize);
            let expected = vec![draws as f64 / cells as f64; cells as usize];
            let stat = chi_square_statistic(&hist, &expected);
            let p_value = chi_square_p_value(stat, cells as u64 - 1);
            Ok(ResampleReport {
                q,
                l,
                mode: Mode::MonteCarlo,
                samples: draws,
                exact: None,
                chi_square: Some(stat),
                p_value: Some(p_value),
                pass: p_value >= significance,
            })
        }
    }
}

fn encode(q: u64, xs: &[u64]) -> usize {
    xs.iter().rev().fold(0u64, |acc, &x| acc * q + x) as usize
}

fn decode(q: u64, len: usize, mut code: u64) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = code % q;
            code /= q;
            d
        })
        .collect()
}

/// Enumerates ordered distinct `ys`, all `zs` and all injective maps from
/// the `b` blocks of `zs` into `{ys}`. A triple has probability
/// `1 / ((q)_ℓ · q^ℓ · ℓ!/(ℓ-b)!)`, i.e. `(ℓ-b)!` over the common denominator
/// `(q)_ℓ · q^ℓ · ℓ!`.
fn exact_distribution(q: u64, l: usize) -> ExactDistribution {
    let cells = q.pow(l as u32);
    let mut numerators = vec![0u128; cells as usize];
    let denominator = falling(q, l as u32) * cells as u128 * factorial(l as u64);

    let all_ys: Vec<Vec<u64>> = (0..cells)
        .map(|c| decode(q, l, c))
        .filter(|ys| (0..l).all(|i| !ys[..i].contains(&ys[i])))
        .collect();

    for zcode in 0..cells {
        let zs = decode(q, l, zcode);
        let (labels, b) = blocks_of(&zs);
        let weight = factorial((l - b) as u64);
        for ys in &all_ys {
            for_each_injection(b, l, &mut Vec::with_capacity(b), &mut |map| {
                let xs: Vec<u64> = labels.iter().map(|&blk| ys[map[blk]]).collect();
                numerators[encode(q, &xs)] += weight;
            });
        }
    }
    ExactDistribution {
        denominator,
        numerators,
    }
}

/// Calls `f` with every injective map `[b] -> [l]`, as a vector of images.
fn for_each_injection(b: usize, l: usize, prefix: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if prefix.len() == b {
        f(prefix);
        return;
    }
    for v in 0..l {
        if !prefix.contains(&v) {
            prefix.push(v);
            for_each_injection(b, l, prefix, f);
            prefix.pop();
        }
    }
}

const CHUNK: u64 = 4096;

fn monte_carlo_histogram(q: u64, l: usize, draws: u64, seed: u64, cells: usize) -> Vec<u64> {
    let chunks = draws.div_ceil(CHUNK);
    let partials: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, c, RESAMPLE_STREAM));
            let mut hist = vec![0u64; cells];
            let mut residues: Vec<u64> = (0..q).collect();
            let n = CHUNK.min(draws - c * CHUNK);
            for _ in 0..n {
                // Uniform ordered sample of l distinct residues.
                let ys = residues.partial_shuffle(&mut rng, l).0.to_vec();
                let zs: Vec<u64> = (0..l).map(|_| rng.gen_range(0..q)).collect();
                let xs = resample_sequence(q, &ys, &zs, &mut rng).expect("valid by construction");
                hist[encode(q, &xs)] += 1;
            }
            hist
        })
        .collect();
    let mut hist = vec![0u64; cells];
    for part in partials {
        for (h, p) in hist.iter_mut().zip(part) {
            *h += p;
        }
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element_is_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for z in 0..5 {
            assert_eq!(resample_sequence(5, &[3], &[z], &mut rng).unwrap(), vec![3]);
        }
    }

    #[test]
    fn equal_zs_give_equal_outputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = [0u32; 10];
        for _ in 0..2000 {
            let xs = resample_sequence(10, &[3, 7], &[5, 5], &mut rng).unwrap();
            assert_eq!(xs[0], xs[1]);
            seen[xs[0] as usize] += 1;
        }
        assert!(seen[3] > 900 && seen[7] > 900 && seen[3] + seen[7] == 2000);
    }

    #[test]
    fn distinct_zs_give_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut swapped = 0;
        for _ in 0..2000 {
            let xs = resample_sequence(10, &[3, 7], &[1, 2], &mut rng).unwrap();
            assert!(xs == [3, 7] || xs == [7, 3]);
            swapped += u32::from(xs == [7, 3]);
        }
        assert!((900..1100).contains(&swapped));
    }

    #[test]
    fn enumerated_maps_for_two_blocks() {
        // (ys, zs) = ((3,7), (1,2)): two injective maps, each weight 0! = 1.
        let mut maps = Vec::new();
        for_each_injection(2, 2, &mut Vec::new(), &mut |m| maps.push(m.to_vec()));
        assert_eq!(maps, vec![vec![0, 1], vec![1, 0]]);
        let mut maps = Vec::new();
        for_each_injection(1, 2, &mut Vec::new(), &mut |m| maps.push(m.to_vec()));
        assert_eq!(maps, vec![vec![0], vec![1]]);
    }

    #[test]
    fn rejects_repeated_ys() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            resample_sequence(5, &[2, 2], &[0, 1], &mut rng),
            Err(Error::InvalidParameter(_))
        ));
        assert!(resample_sequence(5, &[2], &[0, 1], &mut rng).is_err());
        assert!(resample_sequence(1, &[0, 1], &[0, 0], &mut rng).is_err());
    }

    #[test]
    fn outputs_satisfy_case_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let mut pool: Vec<u64> = (0..9).collect();
            let ys = pool.partial_shuffle(&mut rng, 4).0.to_vec();
            let zs: Vec<u64> = (0..4).map(|_| rng.gen_range(0..9)).collect();
            let xs = resample_sequence(9, &ys, &zs, &mut rng).unwrap();
            assert!(ResampleCase { q: 9, ys, zs, xs }.is_valid());
        }
    }

    #[test]
    fn exact_two_by_two_is_quarter_each() {
        let r = resample_distribution_check(2, 2, ResampleMode::Exact, 1 << 20).unwrap();
        let d = r.exact.unwrap();
        // (2)_2 · 2² · 2! = 16
        assert_eq!(d.denominator, 16);
        assert_eq!(d.numerators, vec![4, 4, 4, 4]);
        assert!(r.pass);
    }

    #[test]
    fn exact_three_by_two_is_ninth_each() {
        let r = resample_distribution_check(3, 2, ResampleMode::Exact, 1 << 20).unwrap();
        let d = r.exact.unwrap();
        assert_eq!(d.numerators.len(), 9);
        assert!(d.numerators.iter().all(|&n| n * 9 == d.denominator));
    }

    #[test]
    fn a_biased_procedure_is_detected() {
        let skewed = ExactDistribution {
            denominator: 16,
            numerators: vec![5, 3, 4, 4],
        };
        assert!(!skewed.is_uniform());
        assert_eq!(skewed.max_deviation_numerator(), 1);
    }

    #[test]
    fn budget_and_parameters() {
        assert!(matches!(
            resample_distribution_check(3, 2, ResampleMode::Exact, 0),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(resample_distribution_check(2, 3, ResampleMode::Exact, u128::MAX).is_err());
    }
}
