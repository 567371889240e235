//! Seeded, parallel studies of the random model, and their file output.
//!
//! Every study draws trial `t` from the stream `(master_seed, t)`, runs
//! trials on a dedicated thread pool, and folds the results in trial order,
//! so the output bytes do not depend on the thread count.

mod lemma_suite;
mod manifest;
mod output;
mod scaling;
mod tail;
mod transition;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::InvariantsRecord;

pub use lemma_suite::{run_lemma_suite, LemmaCheck, LemmaSuiteReport, DEFAULT_BUDGET};
pub use manifest::{RunManifest, StudyConfig, TOOL_VERSION};
pub use output::{render_csv, render_json, write_output, Format, Tabular};
pub use scaling::{run_scaling, ScalingConfig, ScalingRow, ScalingStudy};
pub use tail::{run_tail, TailConfig, TailRow, TailStudy};
pub use transition::{run_transition, TransitionConfig, TransitionRow, TransitionStudy};

/// Per-draw audit of the deterministic inequalities `(F+1)/2 <= g <= F+1`
/// and `e <= F+2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub draws: u64,
    pub violations: u64,
    pub capped: u64,
}

impl Audit {
    pub(crate) fn record(&mut self, inv: &InvariantsRecord) {
        self.draws += 1;
        if !inv.satisfies_inequalities() {
            self.violations += 1;
        }
    }

    pub fn merge(&mut self, other: Audit) {
        self.draws += other.draws;
        self.violations += other.violations;
        self.capped += other.capped;
    }

    pub(crate) fn ensure_clean(&self, study: &str) -> Result<()> {
        if self.violations > 0 {
            return Err(Error::InvariantViolation(format!(
                "{study}: {} of {} draws break the invariant inequalities",
                self.violations, self.draws
            )));
        }
        Ok(())
    }
}

/// Machine parallelism, the default thread count.
pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs `f(t)` for `t in 0..trials` on `threads` threads; results come back
/// indexed by trial.
pub(crate) fn run_trials<T, F>(threads: usize, trials: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..trials).into_par_iter().map(&f).collect()))
}

/// `p⁻¹ · ln²(1/p)`, the scale of F and g.
pub fn frobenius_scale(p: f64) -> f64 {
    let l = (1.0 / p).ln();
    l * l / p
}

pub(crate) fn check_grid_decreasing(p_grid: &[f64]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(Error::InvalidParameter("p grid is empty".into()));
    }
    if let Some(p) = p_grid.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::InvalidParameter(format!("p = {p} is outside (0, 1)")));
    }
    if p_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter(
            "p grid must be strictly decreasing".into(),
        ));
    }
    Ok(())
}
