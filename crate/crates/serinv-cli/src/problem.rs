//! Input document parsing and validation.
//!
//! Coefficients are strings so exact fractions survive the trip through
//! JSON. Rational mode accepts integers and `p/q`; float mode additionally
//! accepts decimals and the tokens `sqrt2`, `pi`, `cos(pi/4)`, possibly
//! combined as `a/b`.

use std::str::FromStr;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<(usize, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Vec<(Vec<usize>, String)>>>,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub powers: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<(String, String)>,
}

impl ProblemDoc {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: ProblemDoc =
            serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<(), CliError> {
        match self.kind.as_str() {
            "univariate" => {
                if self.coeffs.is_none() {
                    return Err(CliError::Schema(
                        "univariate problems need a \"coeffs\" list".into(),
                    ));
                }
            }
            "multivariate" => {
                if self.components.is_none() {
                    return Err(CliError::Schema(
                        "multivariate problems need a \"components\" list".into(),
                    ));
                }
                if self.shift.is_some() {
                    return Err(CliError::Schema(
                        "\"shift\" applies to univariate problems only".into(),
                    ));
                }
            }
            other => {
                return Err(CliError::Schema(format!(
                    "unknown kind {other:?}; expected \"univariate\" or \"multivariate\""
                )))
            }
        }
        if self.order < 1 {
            return Err(CliError::Schema("order must be >= 1".into()));
        }
        if let Some(mode) = &self.mode {
            if mode != "rational" && mode != "float" {
                return Err(CliError::Schema(format!(
                    "unknown mode {mode:?}; expected \"rational\" or \"float\""
                )));
            }
        }
        if let Some(method) = &self.method {
            const KNOWN: [&str; 5] = ["operator", "pwq", "matrix-op", "lagrange", "all"];
            if !KNOWN.contains(&method.as_str()) {
                return Err(CliError::Schema(format!(
                    "unknown method {method:?}; expected one of {KNOWN:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> &str {
        self.mode.as_deref().unwrap_or("rational")
    }

    pub fn method(&self) -> &str {
        self.method.as_deref().unwrap_or("operator")
    }
}

/// Exact-fraction parse: integers or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s.trim())
        .map_err(|e| CliError::Schema(format!("bad rational literal {s:?}: {e}")))
}

/// Float parse: decimals, fractions, and the fixture tokens.
pub fn parse_float(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    // Try the whole body first so tokens containing '/' (cos(pi/4)) are not
    // split as quotients.
    let value = match parse_float_atom(body) {
        Ok(v) => v,
        Err(e) => match body.split_once('/') {
            Some((num, den)) => parse_float_atom(num)? / parse_float_atom(den)?,
            None => return Err(e),
        },
    };
    Ok(sign * value)
}

fn parse_float_atom(s: &str) -> Result<f64, CliError> {
    match s.trim() {
        "sqrt2" => Ok(std::f64::consts::SQRT_2),
        "pi" => Ok(std::f64::consts::PI),
        "cos(pi/4)" => Ok(std::f64::consts::FRAC_1_SQRT_2),
        other => f64::from_str(other)
            .map_err(|e| CliError::Schema(format!("bad float literal {other:?}: {e}"))),
    }
}
