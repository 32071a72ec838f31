use thiserror::Error;

/// Errors raised by the numeric and exact reparametrization machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("rational function is constant")]
    ConstantFunction,

    #[error("both gcd inputs are numerically zero")]
    DegenerateGcdInput,

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("parametrization is degenerate: {0}")]
    DegenerateParametrization(String),

    #[error("unstable index: {agreeing} of {total} specializations agree on degree {degree} (votes: {votes:?})")]
    UnstableIndex {
        degree: usize,
        agreeing: usize,
        total: usize,
        /// `(degree, count)` pairs, ascending by degree.
        votes: Vec<(usize, usize)>,
    },

    #[error("no admissible (C_i, C_j) pair in the gcd coefficients")]
    NoAdmissiblePair,

    #[error("recovered gcd is not of the form num(R(t) - R(s)): best residual {residual:.3e} exceeds tolerance {eps:.3e}")]
    NotMobiusLike { residual: f64, eps: f64 },

    #[error("interpolation degree mismatch: relative fit residual {residual:.3e}")]
    InterpolationMismatch { residual: f64 },

    #[error("degenerate leading coefficient in x^{ell} of L_{component}")]
    DegenerateLeadingCoefficient { component: usize, ell: usize },

    #[error("interval ({d1}, {d2}) touches a pole: denominator minimum {minimum:.3e}")]
    PoleInInterval { d1: f64, d2: f64, minimum: f64 },

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("component {component} is not reduced: egcd of numerator and denominator has degree {degree}")]
    NotReduced { component: usize, degree: usize },

    #[error("exact algorithm failure: {0}")]
    Exact(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage an error was raised in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Index,
    BuildR,
    ComputeL,
    ExtractQtilde,
    SimplifyQ,
    Certify,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Stage::Index => "index",
            Stage::BuildR => "build_r",
            Stage::ComputeL => "compute_l",
            Stage::ExtractQtilde => "extract_qtilde",
            Stage::SimplifyQ => "simplify_q",
            Stage::Certify => "certify",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("stage {stage}: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

impl PipelineError {
    pub fn at(stage: Stage) -> impl FnOnce(Error) -> PipelineError {
        move |source| PipelineError { stage, source }
    }
}
