use serde::{Deserialize, Serialize};

use super::{frobenius_scale, run_trials, Audit, Tabular};
use crate::error::{Error, Result};
use crate::random::{check_density, fmt_real, sample_semigroup_with, SamplerConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionConfig {
    pub p: f64,
    pub c_grid: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub threads: usize,
}

impl TransitionConfig {
    pub fn validate(&self) -> Result<()> {
        check_density(self.p)?;
        if self.c_grid.is_empty() || self.c_grid.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::InvalidParameter(
                "C grid must be nonempty and positive".into(),
            ));
        }
        if self.c_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "C grid must be strictly increasing".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionRow {
    pub p: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub trials: u64,
    /// Empirical `P[F < N]`, i.e. `<A>` contains every integer `>= N`.
    pub prob_dense: f64,
    /// Mean of `|<A> ∩ [N]| / N`.
    pub mean_density: f64,
}

impl Tabular for TransitionRow {
    const HEADER: &'static [&'static str] = &["p", "C", "N", "trials", "prob_dense", "mean_density"];

    fn record(&self) -> Vec<String> {
        vec![
            fmt_real(self.p),
            fmt_real(self.c),
            self.n.to_string(),
            self.trials.to_string(),
            fmt_real(self.prob_dense),
            fmt_real(self.mean_density),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct TransitionStudy {
    pub rows: Vec<TransitionRow>,
    pub audit: Audit,
}

/// `N = floor(C · p⁻¹ · ln²(1/p))`, at least 1.
pub fn transition_n(p: f64, c: f64) -> u64 {
    (c * frobenius_scale(p)).floor().max(1.0) as u64
}

/// Each trial draws one `<A>` and evaluates it at every `C`, so all rows
/// share the same semigroups.
pub fn run_transition(config: &TransitionConfig) -> Result<TransitionStudy> {
    config.validate()?;
    let sampler = SamplerConfig::default();
    let ns: Vec<u64> = config.c_grid.iter().map(|&c| transition_n(config.p, c)).collect();

    let draws = run_trials(config.threads, config.trials, |t| {
        sample_semigroup_with(&sampler, config.p, t, config.master_seed).map(|s| {
            let f = s.outcome.invariants.frobenius;
            let per_c: Vec<(bool, u64)> = ns
                .iter()
                .map(|&n| (f < n as i64, s.apery.count_up_to(n)))
                .collect();
            (s.outcome.invariants, per_c)
        })
    })?;

    let mut audit = Audit::default();
    let mut dense = vec![0u64; ns.len()];
    let mut density_sum = vec![0f64; ns.len()];
    let mut used = 0u64;
    for draw in draws {
        match draw {
            Ok((inv, per_c)) => {
                audit.record(&inv);
                used += 1;
                for (i, (is_dense, count)) in per_c.into_iter().enumerate() {
                    dense[i] += u64::from(is_dense);
                    density_sum[i] += count as f64 / ns[i] as f64;
                }
            }
            Err(Error::SamplerDidNotConverge { .. }) => audit.capped += 1,
            Err(e) => return Err(e),
        }
    }
    audit.ensure_clean("transition")?;

    let rows: Vec<TransitionRow> = config
        .c_grid
        .iter()
        .enumerate()
        .map(|(i, &c)| TransitionRow {
            p: config.p,
            c,
            n: ns[i],
            trials: used,
            prob_dense: dense[i] as f64 / used as f64,
            mean_density: density_sum[i] / used as f64,
        })
        .collect();
    if rows.windows(2).any(|w| w[1].prob_dense < w[0].prob_dense) {
        return Err(Error::InvariantViolation(
            "prob_dense decreased along the C grid".into(),
        ));
    }
    Ok(TransitionStudy { rows, audit })
}
