use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opt_foundry::checkers::{DEFAULT_SAMPLES, DEFAULT_SEED};
use opt_foundry::report::Format;
use opt_foundry::theory::BackendKind;

use crate::{CliError, Command, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "opt-foundry", version, about = "Postulate checks, classification sweeps and circuit evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Subcommand, Debug)]
pub enum Sub {
    /// Local equivalence and ES purification on all three backends.
    CheckPostulates {
        #[arg(long, default_value = "2,3")]
        levels: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Which simple candidates admit a composite of the right rank and dimension.
    Classify {
        /// Ranks to sweep, e.g. `2..6` or `2,3`.
        #[arg(long = "n", default_value = "2..6")]
        n: String,
        #[command(flatten)]
        common: Common,
    },
    /// Monoidal laws on random channels.
    LawCheck {
        /// Omit to check every backend.
        #[arg(long)]
        backend: Option<Backend>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Purify random states and check marginals and zigzag residuals.
    Purify {
        #[command(flatten)]
        demo: Demo,
        #[command(flatten)]
        common: Common,
    },
    /// Steer random ensembles through a purification.
    Steer {
        #[command(flatten)]
        demo: Demo,
        /// Ensemble size.
        #[arg(long, default_value_t = 3)]
        outcomes: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Circuit files.
    #[command(subcommand)]
    Circuit(CircuitSub),
}

#[derive(Subcommand, Debug)]
pub enum CircuitSub {
    /// Evaluate every `let` of a circuit file.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Complex)]
        backend: Backend,
        /// JSON manifest of primitive bindings.
        #[arg(long)]
        bindings: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
pub struct Demo {
    #[arg(long, value_enum, default_value_t = Backend::Complex)]
    backend: Backend,
    #[arg(long, default_value = "2,3")]
    levels: String,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, env = crate::SEED_ENV, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Classical,
    Real,
    Complex,
}

impl From<Backend> for BackendKind {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Classical => BackendKind::Classical,
            Backend::Real => BackendKind::RealQT,
            Backend::Complex => BackendKind::ComplexQT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Md,
}

/// Comma-separated integers and inclusive ranges: `2,3`, `2..6`, `1,4..5`.
pub fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse `{s}` as a list of integers"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn levels(s: &str) -> Result<Vec<usize>, CliError> {
    let v = parse_list(s)?;
    if v.is_empty() || v.contains(&0) {
        return Err(CliError::Usage("levels must be positive".into()));
    }
    Ok(v)
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let base = |command, common: Common| RunConfig {
            command,
            backend: None,
            levels: Vec::new(),
            samples: 0,
            seed: common.seed,
            tol: None,
            format: match common.format {
                OutFormat::Json => Format::Json,
                OutFormat::Md => Format::Markdown,
            },
            out: common.out,
            timing: common.timing,
        };
        let demo = |command, demo: Demo, common| -> Result<RunConfig, CliError> {
            Ok(RunConfig {
                backend: Some(demo.backend.into()),
                levels: levels(&demo.levels)?,
                samples: demo.samples,
                tol: demo.tol,
                ..base(command, common)
            })
        };
        Ok(match self.command {
            Sub::CheckPostulates { levels: l, samples, common } => RunConfig {
                levels: levels(&l)?,
                samples,
                ..base(Command::CheckPostulates, common)
            },
            Sub::Classify { n, common } => base(Command::Classify { ns: parse_list(&n)? }, common),
            Sub::LawCheck { backend, samples, tol, common } => RunConfig {
                backend: backend.map(Into::into),
                samples,
                tol,
                ..base(Command::LawCheck, common)
            },
            Sub::Purify { demo: d, common } => demo(Command::Purify, d, common)?,
            Sub::Steer { demo: d, outcomes, common } => demo(Command::Steer { outcomes }, d, common)?,
            Sub::Circuit(CircuitSub::Eval { file, backend, bindings, common }) => RunConfig {
                backend: Some(backend.into()),
                ..base(Command::CircuitEval { file, bindings }, common)
            },
        })
    }
}

/// Parse a full argument vector (program name first).
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .into_config()
}
