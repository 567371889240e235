use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use numsemi::experiments::{
    default_threads, Format, RunManifest, ScalingConfig, StudyConfig, TailConfig,
    TransitionConfig, DEFAULT_BUDGET,
};
use numsemi::{invariants, normalize_generators, Error};

/// Random numerical semigroups: invariants, sampling studies and lemma checks.
#[derive(Parser)]
#[command(name = "numsemi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print F, g, e and q of the semigroup generated by the arguments.
    Invariants {
        #[arg(required = true, allow_negative_numbers = true)]
        gens: Vec<i64>,
    },
    /// Draw semigroups from the random model, one row per trial.
    Sample {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Mean and quantiles of F, g, e across a grid of p.
    Scaling {
        #[arg(long, value_delimiter = ',', required = true)]
        p_grid: Vec<f64>,
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Probability that the semigroup contains every integer from N = C/p ln²(1/p) on.
    Transition {
        #[arg(long)]
        p: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        c_grid: Vec<f64>,
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Mean Frobenius number with generators restricted to [u, ∞).
    Tail {
        #[arg(long)]
        p: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        u_grid: Vec<u64>,
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact lemma checks; writes a JSON report.
    Lemmas {
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun a study from its manifest.
    Replay {
        manifest: PathBuf,
        /// Write here instead of the recorded output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

enum Outcome {
    Ok,
    CheckFailed,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidGenerators(_)
        | Error::NotCofinite { .. }
        | Error::TooLarge { .. }
        | Error::InvalidParameter(_) => 2,
        Error::Json(e) if !e.is_io() => 2,
        Error::SamplerDidNotConverge { .. }
        | Error::BudgetExceeded { .. }
        | Error::InvariantViolation(_) => 3,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(3),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    let (config, format, out) = match command {
        Command::Invariants { gens } => {
            let gens = normalize_generators(&gens)?;
            println!("{}", invariants(&gens)?);
            return Ok(Outcome::Ok);
        }
        Command::Replay { manifest, out } => {
            let m = RunManifest::read(&manifest)?;
            let out = out.or(m.output_path);
            return run_study(m.config, m.format, out);
        }
        Command::Sample { p, trials, common } => (
            StudyConfig::Sample {
                p,
                trials,
                master_seed: common.seed,
                threads: common.threads,
            },
            common.format.into(),
            common.out,
        ),
        Command::Scaling {
            p_grid,
            trials,
            common,
        } => (
            StudyConfig::Scaling(ScalingConfig {
                p_grid,
                trials,
                master_seed: common.seed,
                threads: common.threads,
                output_path: common.out.clone(),
            }),
            common.format.into(),
            common.out,
        ),
        Command::Transition {
            p,
            c_grid,
            trials,
            common,
        } => (
            StudyConfig::Transition(TransitionConfig {
                p,
                c_grid,
                trials,
                master_seed: common.seed,
                threads: common.threads,
            }),
            common.format.into(),
            common.out,
        ),
        Command::Tail {
            p,
            u_grid,
            trials,
            common,
        } => (
            StudyConfig::Tail(TailConfig {
                p,
                u_grid,
                trials,
                master_seed: common.seed,
                threads: common.threads,
            }),
            common.format.into(),
            common.out,
        ),
        Command::Lemmas { budget, out } => (StudyConfig::Lemmas { budget }, Format::Json, out),
    };
    run_study(config, format, out)
}

/// Runs a study, writes its output (stdout when `out` is absent) and, for
/// file output, the manifest sidecar.
fn run_study(config: StudyConfig, format: Format, out: Option<PathBuf>) -> Result<Outcome, Error> {
    let start = Instant::now();
    let output = config.execute(format)?;
    let elapsed = start.elapsed().as_secs_f64();
    match &out {
        Some(path) => {
            write_file(path, &output.bytes)?;
            let manifest = RunManifest::new(config, format, out.clone(), &output, elapsed);
            manifest.write(&RunManifest::sidecar_path(path))?;
        }
        None => std::io::stdout().lock().write_all(&output.bytes)?,
    }
    if output.pass {
        Ok(Outcome::Ok)
    } else {
        eprintln!("error: one or more checks failed");
        Ok(Outcome::CheckFailed)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes)?;
    Ok(())
}
