use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::lemma_suite::registered_checks;
use super::{
    render_csv, render_json, run_lemma_suite, run_scaling, run_tail, run_transition, run_trials,
    Audit, Format, ScalingConfig, TailConfig, Tabular, TransitionConfig,
};
use crate::error::{Error, Result};
use crate::random::{sample_semigroup_with, SampleOutcome, SamplerConfig, SAMPLE_CSV_HEADER};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Everything needed to rerun one CLI study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "study", rename_all = "snake_case")]
pub enum StudyConfig {
    Sample {
        p: f64,
        trials: u64,
        master_seed: u64,
        threads: usize,
    },
    Scaling(ScalingConfig),
    Transition(TransitionConfig),
    Tail(TailConfig),
    Lemmas {
        budget: u128,
    },
}

/// Rendered output of a study.
#[derive(Clone, Debug)]
pub struct StudyOutput {
    pub bytes: Vec<u8>,
    pub rows: usize,
    pub audit: Audit,
    /// False when a check inside the study failed (only the lemma suite
    /// can report this without erroring).
    pub pass: bool,
}

impl Tabular for SampleOutcome {
    const HEADER: &'static [&'static str] = &SAMPLE_CSV_HEADER;

    fn record(&self) -> Vec<String> {
        self.csv_record().to_vec()
    }
}

fn render<T: Tabular>(rows: &[T], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => render_csv(rows),
        Format::Json => render_json(rows),
    }
}

impl StudyConfig {
    pub fn name(&self) -> &'static str {
        match self {
            StudyConfig::Sample { .. } => "sample",
            StudyConfig::Scaling(_) => "scaling",
            StudyConfig::Transition(_) => "transition",
            StudyConfig::Tail(_) => "tail",
            StudyConfig::Lemmas { .. } => "lemmas",
        }
    }

    pub fn master_seed(&self) -> Option<u64> {
        match self {
            StudyConfig::Sample { master_seed, .. } => Some(*master_seed),
            StudyConfig::Scaling(c) => Some(c.master_seed),
            StudyConfig::Transition(c) => Some(c.master_seed),
            StudyConfig::Tail(c) => Some(c.master_seed),
            StudyConfig::Lemmas { .. } => None,
        }
    }

    /// Runs the study and renders it. The lemma suite always renders JSON.
    pub fn execute(&self, format: Format) -> Result<StudyOutput> {
        match self {
            StudyConfig::Sample {
                p,
                trials,
                master_seed,
                threads,
            } => {
                let sampler = SamplerConfig::default();
                let draws = run_trials(*threads, *trials, |t| {
                    sample_semigroup_with(&sampler, *p, t, *master_seed).map(|s| s.outcome)
                })?;
                let rows = draws.into_iter().collect::<Result<Vec<_>>>()?;
                let mut audit = Audit::default();
                rows.iter().for_each(|o| audit.record(&o.invariants));
                audit.ensure_clean("sample")?;
                Ok(StudyOutput {
                    bytes: render(&rows, format)?,
                    rows: rows.len(),
                    audit,
                    pass: true,
                })
            }
            StudyConfig::Scaling(c) => {
                let study = run_scaling(c)?;
                Ok(StudyOutput {
                    bytes: render(&study.rows, format)?,
                    rows: study.rows.len(),
                    audit: study.audit,
                    pass: true,
                })
            }
            StudyConfig::Transition(c) => {
                let study = run_transition(c)?;
                Ok(StudyOutput {
                    bytes: render(&study.rows, format)?,
                    rows: study.rows.len(),
                    audit: study.audit,
                    pass: true,
                })
            }
            StudyConfig::Tail(c) => {
                let study = run_tail(c)?;
                Ok(StudyOutput {
                    bytes: render(&study.rows, format)?,
                    rows: study.rows.len(),
                    audit: study.audit,
                    pass: true,
                })
            }
            StudyConfig::Lemmas { budget } => {
                let report = run_lemma_suite(*budget)?;
                debug_assert_eq!(report.checks.len(), registered_checks());
                let mut bytes = serde_json::to_vec_pretty(&report)?;
                bytes.push(b'\n');
                Ok(StudyOutput {
                    bytes,
                    rows: report.checks.len(),
                    audit: Audit::default(),
                    pass: report.pass,
                })
            }
        }
    }
}

/// Sidecar record written next to every study output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: StudyConfig,
    pub master_seed: Option<u64>,
    pub format: Format,
    pub output_path: Option<PathBuf>,
    pub wall_clock_seconds: f64,
    pub row_counts: BTreeMap<String, usize>,
}

impl RunManifest {
    pub fn new(
        config: StudyConfig,
        format: Format,
        output_path: Option<PathBuf>,
        output: &StudyOutput,
        wall_clock_seconds: f64,
    ) -> Self {
        let mut row_counts = BTreeMap::new();
        row_counts.insert(config.name().to_string(), output.rows);
        Self {
            tool_version: TOOL_VERSION.to_string(),
            master_seed: config.master_seed(),
            config,
            format,
            output_path,
            wall_clock_seconds,
            row_counts,
        }
    }

    /// `<output>.manifest.json`.
    pub fn sidecar_path(output: &Path) -> PathBuf {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        fs::write(path, bytes)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let manifest: Self = serde_json::from_str(&text)?;
        if manifest.tool_version != TOOL_VERSION {
            return Err(Error::InvalidParameter(format!(
                "manifest was written by {}, this is {TOOL_VERSION}",
                manifest.tool_version
            )));
        }
        Ok(manifest)
    }
}
