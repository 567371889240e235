use serde::{Deserialize, Serialize};

use super::{run_trials, Audit, Tabular};
use crate::error::{Error, Result};
use crate::random::{
    check_density, fmt_real, least_consecutive_pair, shifted_sample_semigroup_with, SamplerConfig,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    pub p: f64,
    pub u_grid: Vec<u64>,
    pub trials: u64,
    pub master_seed: u64,
    pub threads: usize,
}

impl TailConfig {
    pub fn validate(&self) -> Result<()> {
        check_density(self.p)?;
        if self.u_grid.is_empty() || self.u_grid.iter().any(|&u| u < 2 || u % 2 != 0) {
            return Err(Error::InvalidParameter(
                "u grid must be nonempty with even entries >= 2".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub p: f64,
    pub u: u64,
    pub trials: u64,
    #[serde(rename = "mean_F_shifted")]
    pub mean_f_shifted: f64,
    /// `p⁻⁴ + u²`.
    pub reference: f64,
}

impl Tabular for TailRow {
    const HEADER: &'static [&'static str] = &["p", "u", "trials", "mean_F_shifted", "reference"];

    fn record(&self) -> Vec<String> {
        vec![
            fmt_real(self.p),
            self.u.to_string(),
            self.trials.to_string(),
            fmt_real(self.mean_f_shifted),
            fmt_real(self.reference),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct TailStudy {
    pub rows: Vec<TailRow>,
    /// Frobenius numbers per u, in trial order.
    pub frobenius: Vec<Vec<i64>>,
    pub audit: Audit,
    /// Draws where F exceeded `2v(2v+1) - (4v+1)` for the least `v` with
    /// `2v, 2v+1` in the shifted set. Always 0 for a correct sampler.
    pub crude_bound_violations: u64,
}

/// Mean Frobenius number of `<A ∩ [u, ∞)>` for each `u`. Trials share
/// their stream across `u`, so each trial's F is non-decreasing in `u`.
pub fn run_tail(config: &TailConfig) -> Result<TailStudy> {
    config.validate()?;
    let sampler = SamplerConfig::default();
    let p = config.p;
    let mut rows = Vec::new();
    let mut frobenius = Vec::new();
    let mut audit = Audit::default();
    let mut crude_bound_violations = 0;
    for &u in &config.u_grid {
        let draws = run_trials(config.threads, config.trials, |t| {
            let s = shifted_sample_semigroup_with(&sampler, p, u, t, config.master_seed)?;
            let v = least_consecutive_pair(p, u, t, config.master_seed)? as i64;
            let crude = 2 * v * (2 * v + 1) - (4 * v + 1);
            Ok::<_, Error>((s.outcome.invariants, s.outcome.invariants.frobenius <= crude))
        })?;
        let mut fs = Vec::with_capacity(draws.len());
        for draw in draws {
            match draw {
                Ok((inv, under_crude)) => {
                    audit.record(&inv);
                    crude_bound_violations += u64::from(!under_crude);
                    fs.push(inv.frobenius);
                }
                Err(Error::SamplerDidNotConverge { .. }) => audit.capped += 1,
                Err(e) => return Err(e),
            }
        }
        let mean = fs.iter().map(|&f| f as f64).sum::<f64>() / fs.len() as f64;
        let row = TailRow {
            p,
            u,
            trials: fs.len() as u64,
            mean_f_shifted: mean,
            reference: p.powi(-4) + (u * u) as f64,
        };
        if !(row.mean_f_shifted.is_finite() && row.mean_f_shifted >= 0.0) {
            return Err(Error::InvariantViolation(format!("tail row {row:?}")));
        }
        rows.push(row);
        frobenius.push(fs);
    }
    audit.ensure_clean("tail")?;
    if crude_bound_violations > 0 {
        return Err(Error::InvariantViolation(format!(
            "tail: {crude_bound_violations} draws exceed the consecutive-pair bound"
        )));
    }
    Ok(TailStudy {
        rows,
        frobenius,
        audit,
        crude_bound_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_grows_with_the_shift() {
        let config = TailConfig {
            p: 0.3,
            u_grid: vec![2, 10, 50],
            trials: 50,
            master_seed: 12,
            threads: 2,
        };
        let study = run_tail(&config).unwrap();
        for w in study.frobenius.windows(2) {
            for (a, b) in w[0].iter().zip(&w[1]) {
                assert!(a <= b);
            }
        }
        for w in study.rows.windows(2) {
            assert!(w[0].mean_f_shifted <= w[1].mean_f_shifted);
        }
        assert_eq!(study.rows[1].reference, 0.3f64.powi(-4) + 100.0);
    }

    #[test]
    fn rejects_odd_shift() {
        let config = TailConfig {
            p: 0.3,
            u_grid: vec![2, 5],
            trials: 5,
            master_seed: 0,
            threads: 1,
        };
        assert!(run_tail(&config).is_err());
    }
}
