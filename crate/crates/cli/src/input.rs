//! Curve description files.
//!
//! A file holds `{"x": {"num": [...], "den": [...]}, "y": {...}}` with
//! coefficients in ascending degree. A coefficient is a JSON number, a decimal
//! or `p/q` string, or a `[re, im]` pair of either.

use std::path::Path;

use num_complex::Complex64;
use numreparam::approxgcd::egcd_uni;
use numreparam::exact::{parse_decimal, rat_from_f64, rat_to_f64, ExactParametrization, ExactRational, Rat, RatPoly};
use numreparam::{PlaneParametrization, Poly, RationalFunction};
use serde_json::Value;

use crate::CliError;

/// One coefficient as written in the file.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Float(f64),
    Text(String),
}

impl Scalar {
    fn parse(v: &Value, at: &str) -> Result<Scalar, CliError> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .map(Scalar::Float)
                .ok_or_else(|| CliError::Format(format!("{at}: number out of range"))),
            Value::String(s) => {
                if parse_decimal(s).is_none() {
                    return Err(CliError::Format(format!("{at}: not a decimal or p/q string: {s:?}")));
                }
                Ok(Scalar::Text(s.clone()))
            }
            _ => Err(CliError::Format(format!("{at}: expected a number or string"))),
        }
    }

    /// Nearest double. Decimal strings go through the standard library parser,
    /// which rounds correctly.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Float(x) => *x,
            Scalar::Text(s) => s.trim().parse::<f64>().unwrap_or_else(|_| {
                parse_decimal(s).map_or(f64::NAN, |r| rat_to_f64(&r))
            }),
        }
    }

    pub fn to_rat(&self) -> Result<Rat, CliError> {
        match self {
            Scalar::Float(x) => Ok(rat_from_f64(*x)?),
            Scalar::Text(s) => parse_decimal(s).ok_or_else(|| CliError::Format(format!("bad coefficient {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    pub re: Scalar,
    pub im: Option<Scalar>,
}

impl Coefficient {
    fn parse(v: &Value, at: &str) -> Result<Coefficient, CliError> {
        match v {
            Value::Array(pair) if pair.len() == 2 => Ok(Coefficient {
                re: Scalar::parse(&pair[0], at)?,
                im: Some(Scalar::parse(&pair[1], at)?),
            }),
            Value::Array(_) => Err(CliError::Format(format!("{at}: complex coefficients are [re, im] pairs"))),
            _ => Ok(Coefficient { re: Scalar::parse(v, at)?, im: None }),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.as_ref().map_or(0.0, Scalar::to_f64))
    }

    fn to_rat(&self, at: &str) -> Result<Rat, CliError> {
        if let Some(im) = &self.im {
            if im.to_f64() != 0.0 {
                return Err(CliError::Format(format!("{at}: exact mode needs real coefficients")));
            }
        }
        self.re.to_rat()
    }
}

/// Parsed file contents, kept in the written form so exact mode can read
/// decimal strings without rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveInput {
    /// `[x.num, x.den, y.num, y.den]`
    pub polys: [Vec<Coefficient>; 4],
}

const NAMES: [&str; 4] = ["x.num", "x.den", "y.num", "y.den"];

impl CurveInput {
    pub fn from_json(text: &str) -> Result<CurveInput, CliError> {
        let root: Value = serde_json::from_str(text)?;
        let mut polys: [Vec<Coefficient>; 4] = Default::default();
        for (k, name) in NAMES.iter().enumerate() {
            let (comp, part) = name.split_once('.').unwrap();
            let list = root
                .get(comp)
                .and_then(|c| c.get(part))
                .and_then(Value::as_array)
                .ok_or_else(|| CliError::Format(format!("missing coefficient list {name}")))?;
            if list.is_empty() {
                return Err(CliError::Format(format!("{name}: empty coefficient list")));
            }
            polys[k] = list
                .iter()
                .enumerate()
                .map(|(i, v)| Coefficient::parse(v, &format!("{name}[{i}]")))
                .collect::<Result<_, _>>()?;
        }
        Ok(CurveInput { polys })
    }

    pub fn to_numeric(&self) -> Result<PlaneParametrization, CliError> {
        let poly = |k: usize| -> Result<Poly, CliError> {
            let coeffs: Vec<Complex64> = self.polys[k].iter().map(Coefficient::to_complex).collect();
            if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(CliError::Format(format!("{}[{i}]: non-finite coefficient", NAMES[k])));
            }
            Ok(Poly::from_raw(coeffs))
        };
        let x = RationalFunction::new(poly(0)?, poly(1)?)?;
        let y = RationalFunction::new(poly(2)?, poly(3)?)?;
        Ok(PlaneParametrization::new(x, y))
    }

    pub fn to_exact(&self) -> Result<ExactParametrization, CliError> {
        let poly = |k: usize| -> Result<RatPoly, CliError> {
            let coeffs = self.polys[k]
                .iter()
                .enumerate()
                .map(|(i, c)| c.to_rat(&format!("{}[{i}]", NAMES[k])))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(RatPoly::new(coeffs))
        };
        let x = ExactRational::new(poly(0)?, poly(1)?)?;
        let y = ExactRational::new(poly(2)?, poly(3)?)?;
        Ok(ExactParametrization::new(x, y))
    }
}

/// Reads a curve file and checks that each component is reduced at `eps`.
pub fn parse_input(path: &Path, eps: f64) -> Result<PlaneParametrization, CliError> {
    let p = read_input(path)?.to_numeric()?;
    check_reduced(&p, eps)?;
    Ok(p)
}

pub fn read_input(path: &Path) -> Result<CurveInput, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    CurveInput::from_json(&text)
}

/// Numerator and denominator of each component must have a trivial ε-gcd.
pub fn check_reduced(p: &PlaneParametrization, eps: f64) -> Result<(), CliError> {
    for (k, f) in p.components().iter().enumerate() {
        let degree = egcd_uni(&f.num, &f.den, eps)?.degree();
        if degree > 0 {
            return Err(numreparam::Error::NotReduced { component: k + 1, degree }.into());
        }
    }
    Ok(())
}

/// Coefficient list in the input encoding: real numbers stay numbers,
/// anything with an imaginary part becomes `[re, im]`.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| complex_to_json(c)).collect())
}

pub fn complex_to_json(c: Complex64) -> Value {
    if c.im.to_bits() == 0 {
        Value::from(c.re)
    } else {
        Value::Array(vec![Value::from(c.re), Value::from(c.im)])
    }
}

pub fn rational_to_json(f: &RationalFunction) -> Value {
    serde_json::json!({ "num": poly_to_json(&f.num), "den": poly_to_json(&f.den) })
}

pub fn curve_to_json(p: &PlaneParametrization) -> Value {
    serde_json::json!({ "x": rational_to_json(&p.x), "y": rational_to_json(&p.y) })
}

/// Exact coefficients as `p/q` strings.
pub fn rat_poly_to_json(p: &RatPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::from(c.to_string())).collect())
}

pub fn exact_rational_to_json(f: &ExactRational) -> Value {
    serde_json::json!({ "num": rat_poly_to_json(&f.num), "den": rat_poly_to_json(&f.den) })
}

pub fn exact_curve_to_json(p: &ExactParametrization) -> Value {
    serde_json::json!({ "x": exact_rational_to_json(&p.x), "y": exact_rational_to_json(&p.y) })
}
