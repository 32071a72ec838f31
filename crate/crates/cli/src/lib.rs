//! Command-line driver: reads a curve file, runs the numeric or exact
//! reparametrization, and writes a JSON report with optional bound, SVG and
//! CSV outputs.

pub mod input;
pub mod plot;
pub mod report;

use std::path::{Path, PathBuf};

use numreparam::errorbound::{error_bound, IntervalSpec};
use numreparam::exact::exact_reparametrize;
use numreparam::reparam::{reparametrize, Options};
use numreparam::{Error, PipelineError, PlaneParametrization, RationalFunction};
use serde::Serialize;
use thiserror::Error;

use crate::input::{check_reduced, curve_to_json, read_input};
use crate::report::Report;

/// Parameters sampled for the empirical deviation in the error-bound report.
pub const EMPIRICAL_SAMPLES: usize = 1000;

pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const UNSTABLE_INDEX: u8 = 3;
    pub const NO_PAIR: u8 = 4;
    pub const INTERPOLATION: u8 = 5;
    pub const POLE: u8 = 6;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Format(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] Error),

    #[error(transparent)]
    Pipeline(#[from] PipelineError),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Json(_) | CliError::Format(_) | CliError::Config(_) => exit::PARSE,
            CliError::Core(e) => core_exit_code(e),
            CliError::Pipeline(e) => core_exit_code(&e.source),
            CliError::Csv(_) => exit::FAILURE,
        }
    }
}

pub fn core_exit_code(e: &Error) -> u8 {
    match e {
        Error::ZeroDenominator | Error::NotReduced { .. } | Error::InvalidInterval(_) => exit::PARSE,
        Error::UnstableIndex { .. } => exit::UNSTABLE_INDEX,
        Error::NoAdmissiblePair | Error::NotMobiusLike { .. } => exit::NO_PAIR,
        Error::InterpolationMismatch { .. } => exit::INTERPOLATION,
        Error::PoleInInterval { .. } => exit::POLE,
        _ => exit::FAILURE,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Numeric,
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub input: PathBuf,
    pub eps: f64,
    pub interval: Option<(f64, f64)>,
    pub seed: u64,
    pub n_samples: Option<usize>,
    pub report: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub mode: Mode,
}

impl JobConfig {
    pub fn new(input: impl Into<PathBuf>, eps: f64) -> JobConfig {
        JobConfig {
            input: input.into(),
            eps,
            interval: None,
            seed: 0,
            n_samples: None,
            report: None,
            plot: None,
            csv: None,
            mode: Mode::Numeric,
        }
    }

    pub fn validate(&self) -> Result<Option<IntervalSpec>, CliError> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(CliError::Config(format!("eps must be positive, got {}", self.eps)));
        }
        let interval = self.interval.map(|(d1, d2)| IntervalSpec::new(d1, d2)).transpose()?;
        if interval.is_none() && (self.plot.is_some() || self.csv.is_some()) {
            return Err(CliError::Config("--plot and --csv need --interval".into()));
        }
        Ok(interval)
    }
}

/// Parses `d1:d2`.
pub fn parse_interval(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(':').ok_or_else(|| format!("expected d1:d2, got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let (d1, d2) = (parse(a)?, parse(b)?);
    IntervalSpec::new(d1, d2).map_err(|e| e.to_string())?;
    Ok((d1, d2))
}

/// Finished job: the report and the process exit status.
#[derive(Clone, Debug)]
pub struct JobOutcome {
    pub report: Report,
    pub exit_code: u8,
    /// `(P, Q, R)` of a successful run, for plotting.
    pub curves: Option<(PlaneParametrization, PlaneParametrization, RationalFunction)>,
}

/// Runs the job without writing any output.
pub fn execute(cfg: &JobConfig) -> JobOutcome {
    let mut report = Report::new(cfg.mode, cfg.eps, cfg.seed, cfg.n_samples);
    let outcome = |report: Report, exit_code, curves| JobOutcome { report, exit_code, curves };

    let interval = match cfg.validate() {
        Ok(i) => i,
        Err(e) => return outcome(fail(report, "input", &e), e.exit_code(), None),
    };
    let parsed = read_input(&cfg.input).and_then(|raw| {
        let p = raw.to_numeric()?;
        check_reduced(&p, cfg.eps)?;
        Ok((raw, p))
    });
    let (raw, p) = match parsed {
        Ok(v) => v,
        Err(e) => return outcome(fail(report, "input", &e), e.exit_code(), None),
    };
    report.input = Some(curve_to_json(&p));

    let (q, r, eps_used) = match cfg.mode {
        Mode::Numeric => {
            let opts = Options { n_samples: cfg.n_samples, seed: cfg.seed };
            match reparametrize(&p, cfg.eps, opts) {
                Ok(rep) => {
                    report.fill_numeric(&rep);
                    (rep.q, rep.r, rep.eps_bar)
                }
                Err(e) => {
                    let code = core_exit_code(&e.source);
                    report.fail(e.stage, &e.source, code);
                    return outcome(report, code, None);
                }
            }
        }
        Mode::Exact => {
            let result = raw.to_exact().and_then(|pe| Ok(exact_reparametrize(&pe)?));
            match result {
                Ok(rep) => {
                    report.fill_exact(&rep);
                    (rep.q.to_numeric(), rep.r.to_numeric(), cfg.eps)
                }
                Err(e) => return outcome(fail(report, "exact", &e), e.exit_code(), None),
            }
        }
    };

    if let Some(interval) = interval {
        match error_bound(&p, &q, &r, &interval, eps_used, EMPIRICAL_SAMPLES) {
            Ok(b) => report.error_bound = Some(b),
            Err(e) => {
                let code = core_exit_code(&e);
                report.fail("error_bound", &e, code);
                return outcome(report, code, None);
            }
        }
    }
    outcome(report, exit::OK, Some((p, q, r)))
}

fn fail(mut report: Report, stage: &str, err: &CliError) -> Report {
    let core = match err {
        CliError::Core(e) => e.clone(),
        CliError::Pipeline(e) => e.source.clone(),
        other => Error::Exact(other.to_string()),
    };
    report.fail(stage, &core, err.exit_code());
    if !matches!(err, CliError::Core(_) | CliError::Pipeline(_)) {
        if let Some(info) = report.error.as_mut() {
            info.kind = "input";
            info.message = err.to_string();
        }
    }
    report
}

/// Runs the job and writes the report (to stdout when no path is given),
/// plot and CSV. Returns the exit status.
pub fn run_job(cfg: &JobConfig) -> Result<u8, CliError> {
    let out = execute(cfg);
    let json = out.report.to_json();
    match &cfg.report {
        Some(path) => write(path, json.as_bytes())?,
        None => print!("{json}"),
    }
    if let (Some((p, q, r)), Some((d1, d2))) = (&out.curves, cfg.interval) {
        let interval = IntervalSpec::new(d1, d2)?;
        let points = plot::sample(p, q, r, &interval, plot::DEFAULT_SAMPLES);
        if let Some(path) = &cfg.plot {
            write(path, plot::render_svg(&points).as_bytes())?;
        }
        if let Some(path) = &cfg.csv {
            let file = std::fs::File::create(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            plot::write_csv(&points, file)?;
        }
    }
    Ok(out.exit_code)
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
