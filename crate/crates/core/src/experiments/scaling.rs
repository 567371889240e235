use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{check_grid_decreasing, frobenius_scale, run_trials, Audit, Tabular};
use crate::error::{Error, Result};
use crate::random::{fmt_real, sample_semigroup_with, SampleOutcome, SamplerConfig};
use crate::stats::{mean, nearest_rank};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub p_grid: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub threads: usize,
    pub output_path: Option<PathBuf>,
}

impl ScalingConfig {
    pub fn validate(&self) -> Result<()> {
        check_grid_decreasing(&self.p_grid)?;
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// Aggregates of F, g, e over the trials at one density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub p: f64,
    pub trials: u64,
    pub capped: u64,
    #[serde(rename = "mean_F")]
    pub mean_f: f64,
    #[serde(rename = "median_F")]
    pub median_f: i64,
    #[serde(rename = "q10_F")]
    pub q10_f: i64,
    #[serde(rename = "q90_F")]
    pub q90_f: i64,
    pub mean_g: f64,
    pub mean_e: f64,
    /// `mean_F / (p⁻¹ ln²(1/p))`.
    #[serde(rename = "ratio_F_ln")]
    pub ratio_f_ln: f64,
    /// `mean_e / ln²(1/p)`.
    pub ratio_e_ln: f64,
    #[serde(rename = "ratio_gF")]
    pub ratio_g_f: f64,
    /// Fraction of trials with `F <= 5 p⁻¹ (log₂(1/p))²`.
    pub frac_under_envelope_log2: f64,
}

impl ScalingRow {
    fn from_outcomes(p: f64, outcomes: &[SampleOutcome], capped: u64) -> Self {
        let fs: Vec<f64> = outcomes.iter().map(|o| o.invariants.frobenius as f64).collect();
        let gs: Vec<f64> = outcomes.iter().map(|o| o.invariants.genus as f64).collect();
        let es: Vec<f64> = outcomes
            .iter()
            .map(|o| o.invariants.embedding_dim as f64)
            .collect();
        let mut sorted: Vec<i64> = outcomes.iter().map(|o| o.invariants.frobenius).collect();
        sorted.sort_unstable();

        let ln = (1.0 / p).ln();
        let log2 = (1.0 / p).log2();
        let envelope = 5.0 / p * log2 * log2;
        let mean_f = mean(&fs);
        let mean_g = mean(&gs);
        let mean_e = mean(&es);
        let under = outcomes
            .iter()
            .filter(|o| o.invariants.frobenius as f64 <= envelope)
            .count();
        Self {
            p,
            trials: outcomes.len() as u64,
            capped,
            mean_f,
            median_f: nearest_rank(&sorted, 0.5).unwrap_or(0),
            q10_f: nearest_rank(&sorted, 0.1).unwrap_or(0),
            q90_f: nearest_rank(&sorted, 0.9).unwrap_or(0),
            mean_g,
            mean_e,
            ratio_f_ln: mean_f / frobenius_scale(p),
            ratio_e_ln: mean_e / (ln * ln),
            ratio_g_f: mean_g / mean_f,
            frac_under_envelope_log2: under as f64 / outcomes.len() as f64,
        }
    }

    /// `0.5 <= ratio_gF <= 1 + 1/mean_F` (when `mean_F > 0`) and the
    /// envelope fraction lies in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-12;
        let frac_ok = (0.0..=1.0).contains(&self.frac_under_envelope_log2);
        let ratio_ok = !(self.mean_f > 0.0)
            || (self.ratio_g_f >= 0.5 - tol && self.ratio_g_f <= 1.0 + 1.0 / self.mean_f + tol);
        if self.trials > 0 && !(frac_ok && ratio_ok) {
            return Err(Error::InvariantViolation(format!("scaling row {self:?}")));
        }
        Ok(())
    }
}

impl Tabular for ScalingRow {
    const HEADER: &'static [&'static str] = &[
        "p",
        "trials",
        "capped",
        "mean_F",
        "median_F",
        "q10_F",
        "q90_F",
        "mean_g",
        "mean_e",
        "ratio_F_ln",
        "ratio_e_ln",
        "ratio_gF",
        "frac_under_envelope_log2",
    ];

    fn record(&self) -> Vec<String> {
        vec![
            fmt_real(self.p),
            self.trials.to_string(),
            self.capped.to_string(),
            fmt_real(self.mean_f),
            self.median_f.to_string(),
            self.q10_f.to_string(),
            self.q90_f.to_string(),
            fmt_real(self.mean_g),
            fmt_real(self.mean_e),
            fmt_real(self.ratio_f_ln),
            fmt_real(self.ratio_e_ln),
            fmt_real(self.ratio_g_f),
            fmt_real(self.frac_under_envelope_log2),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct ScalingStudy {
    pub rows: Vec<ScalingRow>,
    /// Successful draws per p, in trial order.
    pub outcomes: Vec<Vec<SampleOutcome>>,
    pub audit: Audit,
}

/// For each p, draws `trials` semigroups and aggregates their invariants.
/// Capped trials are counted and left out of the aggregates.
pub fn run_scaling(config: &ScalingConfig) -> Result<ScalingStudy> {
    config.validate()?;
    let sampler = SamplerConfig::default();
    let mut rows = Vec::with_capacity(config.p_grid.len());
    let mut all = Vec::with_capacity(config.p_grid.len());
    let mut audit = Audit::default();
    for &p in &config.p_grid {
        let draws = run_trials(config.threads, config.trials, |t| {
            sample_semigroup_with(&sampler, p, t, config.master_seed)
        })?;
        let mut outcomes = Vec::with_capacity(draws.len());
        let mut capped = 0;
        for draw in draws {
            match draw {
                Ok(s) => {
                    audit.record(&s.outcome.invariants);
                    outcomes.push(s.outcome);
                }
                Err(Error::SamplerDidNotConverge { .. }) => capped += 1,
                Err(e) => return Err(e),
            }
        }
        audit.capped += capped;
        let row = ScalingRow::from_outcomes(p, &outcomes, capped);
        row.validate()?;
        rows.push(row);
        all.push(outcomes);
    }
    audit.ensure_clean("scaling")?;
    Ok(ScalingStudy {
        rows,
        outcomes: all,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::render_csv;

    fn config(threads: usize) -> ScalingConfig {
        ScalingConfig {
            p_grid: vec![0.2, 0.05, 0.02],
            trials: 10,
            master_seed: 17,
            threads,
            output_path: None,
        }
    }

    #[test]
    fn one_row_per_density() {
        let study = run_scaling(&config(2)).unwrap();
        assert_eq!(study.rows.len(), 3);
        let csv = String::from_utf8(render_csv(&study.rows).unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("p,trials,capped,mean_F,median_F,q10_F,q90_F,mean_g,mean_e,ratio_F_ln,ratio_e_ln,ratio_gF,frac_under_envelope_log2\n"));
        assert_eq!(study.audit.draws, 30);
        assert_eq!(study.audit.violations, 0);
    }

    #[test]
    fn rows_follow_outcomes() {
        let study = run_scaling(&config(1)).unwrap();
        let row = &study.rows[1];
        let fs: Vec<i64> = study.outcomes[1].iter().map(|o| o.invariants.frobenius).collect();
        let mean_f = fs.iter().sum::<i64>() as f64 / fs.len() as f64;
        assert!((row.mean_f - mean_f).abs() < 1e-9);
        assert!(row.q10_f <= row.median_f && row.median_f <= row.q90_f);
    }

    #[test]
    fn thread_count_does_not_change_bytes() {
        let a = render_csv(&run_scaling(&config(1)).unwrap().rows).unwrap();
        let b = render_csv(&run_scaling(&config(3)).unwrap().rows).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let mut c = config(1);
        c.p_grid = vec![0.1, 0.2];
        assert!(run_scaling(&c).is_err());
        c.p_grid = vec![];
        assert!(run_scaling(&c).is_err());
        c.p_grid = vec![1.5];
        assert!(run_scaling(&c).is_err());
        let mut c = config(1);
        c.trials = 0;
        assert!(run_scaling(&c).is_err());
    }
}
