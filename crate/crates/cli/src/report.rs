//! JSON job report.

use numreparam::errorbound::ErrorBoundReport;
use numreparam::reparam::{Diagnostics, ReparamReport};
use numreparam::{BiPoly, Error};
use serde::Serialize;
use serde_json::Value;

use crate::input::{complex_to_json, curve_to_json, exact_curve_to_json, exact_rational_to_json, rational_to_json};
use crate::Mode;

pub const EXACT_MESSAGE: &str = "Q is a proper reparametrization of P";

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub stage: String,
    pub kind: &'static str,
    pub message: String,
    pub exit_code: u8,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub mode: Mode,
    pub eps: f64,
    pub seed: u64,
    pub samples: Option<usize>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escalated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qtilde: Option<Value>,
    /// Coefficients of `S(t, s)`, rows in `t`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<ErrorBoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl Report {
    pub fn new(mode: Mode, eps: f64, seed: u64, samples: Option<usize>) -> Report {
        Report {
            mode,
            eps,
            seed,
            samples,
            status: "ok",
            input: None,
            message: None,
            ell: None,
            eps_bar: None,
            escalated: None,
            pair: None,
            r: None,
            q: None,
            qtilde: None,
            s: None,
            diagnostics: None,
            error_bound: None,
            error: None,
        }
    }

    pub fn fill_numeric(&mut self, rep: &ReparamReport) {
        self.message = Some(rep.message());
        self.ell = Some(rep.ell);
        self.eps_bar = Some(rep.eps_bar);
        self.escalated = Some(rep.escalated());
        self.pair = rep.pair_choice;
        self.r = Some(rational_to_json(&rep.r));
        self.q = Some(curve_to_json(&rep.q));
        self.qtilde = Some(curve_to_json(&rep.qtilde));
        self.s = Some(bipoly_to_json(&rep.s));
        self.diagnostics = Some(rep.diagnostics.clone());
    }

    pub fn fill_exact(&mut self, rep: &numreparam::exact::ExactReparametrization) {
        self.message = Some(if rep.ell == 1 { "already ε-proper".to_string() } else { EXACT_MESSAGE.to_string() });
        self.ell = Some(rep.ell);
        self.pair = rep.pair;
        self.r = Some(exact_rational_to_json(&rep.r));
        self.q = Some(exact_curve_to_json(&rep.q));
        self.s = Some(bipoly_to_json(&numreparam::exact::to_bipoly(&rep.s)));
    }

    pub fn fail(&mut self, stage: impl ToString, err: &Error, exit_code: u8) {
        self.status = "error";
        self.error = Some(ErrorInfo { stage: stage.to_string(), kind: error_kind(err), message: err.to_string(), exit_code });
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

pub fn bipoly_to_json(s: &BiPoly) -> Value {
    Value::Array(s.rows().iter().map(|row| Value::Array(row.iter().map(|&c| complex_to_json(c)).collect())).collect())
}

pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::ZeroPolynomial => "zero_polynomial",
        Error::ZeroDenominator => "zero_denominator",
        Error::ConstantFunction => "constant_function",
        Error::DegenerateGcdInput => "degenerate_gcd_input",
        Error::Shape(_) => "shape",
        Error::DegenerateParametrization(_) => "degenerate_parametrization",
        Error::UnstableIndex { .. } => "unstable_index",
        Error::NoAdmissiblePair => "no_admissible_pair",
        Error::NotMobiusLike { .. } => "not_mobius_like",
        Error::InterpolationMismatch { .. } => "interpolation_mismatch",
        Error::DegenerateLeadingCoefficient { .. } => "degenerate_leading_coefficient",
        Error::PoleInInterval { .. } => "pole_in_interval",
        Error::InvalidInterval(_) => "invalid_interval",
        Error::NotReduced { .. } => "not_reduced",
        Error::Exact(_) => "exact",
    }
}
