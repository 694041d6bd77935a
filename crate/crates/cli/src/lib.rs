//! Command dispatch for the `opt-foundry` binary.
//!
//! [`run_command`] turns a [`RunConfig`] into a [`CheckReport`] and its
//! rendering. Reports omit `runtime_ms` unless timing is requested, so a fixed
//! seed gives byte-identical output.

mod args;
mod demos;

use std::fmt;
use std::fs;
use std::path::PathBuf;

use opt_foundry::checkers::{classification_exclusion, postulate_table};
use opt_foundry::dsl::{law_check_with, Evaluator, LAW_TOL};
use opt_foundry::report::{emit_report, CheckReport, Format, Witness};
use opt_foundry::theory::BackendKind;
use opt_foundry::Error;

pub use args::{parse_args, parse_list, Cli};
pub use demos::{circuit_report, purify_report, steer_report};

pub const SEED_ENV: &str = "OPT_FOUNDRY_SEED";

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    CheckPostulates,
    Classify { ns: Vec<usize> },
    LawCheck,
    Purify,
    Steer { outcomes: usize },
    CircuitEval { file: PathBuf, bindings: Option<PathBuf> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `None` runs every backend where that makes sense.
    pub backend: Option<BackendKind>,
    pub levels: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: CheckReport,
    pub text: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failed(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::InvalidInput(_) | Error::Binding(_) | Error::Unsupported(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

fn backend_or(cfg: &RunConfig, default: BackendKind) -> BackendKind {
    cfg.backend.unwrap_or(default)
}

fn law_report(cfg: &RunConfig) -> Result<CheckReport, CliError> {
    let tol = cfg.tol.unwrap_or(LAW_TOL);
    if let Some(kind) = cfg.backend {
        return Ok(law_check_with(&Evaluator::new(kind), cfg.samples, cfg.seed, tol)?);
    }
    let mut rep = CheckReport::new("law_check").with_tol("law", tol);
    rep.seed = Some(cfg.seed);
    for kind in BackendKind::ALL {
        let sub = law_check_with(&Evaluator::new(kind), cfg.samples, cfg.seed, tol)?;
        rep.levels = sub.levels.clone();
        rep.samples += sub.samples;
        if !sub.passed() {
            rep.fail(sub.witnesses.into_iter().map(|w| Witness {
                label: format!("{}/{}", kind.name(), w.label),
                ..w
            }));
        }
        rep.notes.extend(sub.notes.iter().map(|n| format!("{}: {n}", kind.name())));
    }
    Ok(rep)
}

/// Run one command and render its report. The rendering is also written to
/// `cfg.out` when set.
pub fn run_command(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if let Some(t) = cfg.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {t}")));
        }
    }
    let mut report = match &cfg.command {
        Command::CheckPostulates => postulate_table(&cfg.levels, cfg.samples, cfg.seed)?,
        Command::Classify { ns } => {
            let mut r = classification_exclusion(ns.iter().copied())?;
            r.seed = Some(cfg.seed);
            r
        }
        Command::LawCheck => law_report(cfg)?,
        Command::Purify => purify_report(
            backend_or(cfg, BackendKind::ComplexQT),
            &cfg.levels,
            cfg.samples,
            cfg.seed,
            cfg.tol,
        )?,
        Command::Steer { outcomes } => steer_report(
            backend_or(cfg, BackendKind::ComplexQT),
            &cfg.levels,
            cfg.samples,
            *outcomes,
            cfg.seed,
            cfg.tol,
        )?,
        Command::CircuitEval { file, bindings } => {
            let source = read(file)?;
            let json = match bindings {
                Some(p) => read(p)?,
                None => "{}".to_string(),
            };
            let mut r = circuit_report(&source, backend_or(cfg, BackendKind::ComplexQT), &json)?;
            r.seed = Some(cfg.seed);
            r
        }
    };
    if !cfg.timing {
        report.runtime_ms = None;
    }
    let text = emit_report(&report, cfg.format);
    if let Some(path) = &cfg.out {
        fs::write(path, &text).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome { report, text })
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
