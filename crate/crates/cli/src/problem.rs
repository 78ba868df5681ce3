//! Problem specification: a TOML file plus command-line overrides.
//!
//! ```toml
//! function   = "1/(1+z1+z2+z3+z2*z3)"
//! variables  = ["z1", "z2", "z3"]
//! directions = [[1, 1, 1], [1, 2, 2]]
//! t          = [0.01, "0.002+0.001i"]   # optional; numbers or complex strings
//! rho        = "auto"                   # or a list of reals; default "auto"
//! matrix     = [[1,1,0],[1,2,0],[1,2,1]] # optional completion override
//!
//! [quadrature]
//! tol   = 1e-10
//! n_max = 256
//!
//! [series]
//! order = 12
//! ```

use std::str::FromStr;

use diagint_core::laurent::variables;
use diagint_core::quadrature::MAX_NODES;
use diagint_core::{ExponentVector, IntMatrix, RationalFunction, Variables};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;
use crate::parse::parse_expression;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_N_MAX: usize = MAX_NODES;
pub const DEFAULT_SERIES_ORDER: u64 = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum RhoSetting {
    Auto,
    Given(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub function_text: String,
    pub vars: Variables,
    pub function: RationalFunction,
    pub directions: Vec<ExponentVector>,
    pub t: Option<Vec<Complex64>>,
    pub rho: RhoSetting,
    pub matrix: Option<IntMatrix>,
    pub tol: f64,
    pub n_max: usize,
    pub series_order: u64,
}

/// Values given on the command line; each replaces the spec-file entry.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub t: Option<String>,
    pub rho: Option<String>,
    /// Contents of a `--matrix` file.
    pub matrix: Option<String>,
    pub tol: Option<f64>,
    pub n_max: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RhoField {
    Text(String),
    List(Vec<Scalar>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadratureSection {
    tol: Option<f64>,
    n_max: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesSection {
    order: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    function: String,
    variables: Vec<String>,
    #[serde(default)]
    directions: Vec<Vec<i64>>,
    t: Option<Vec<Scalar>>,
    rho: Option<RhoField>,
    matrix: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    quadrature: QuadratureSection,
    #[serde(default)]
    series: SeriesSection,
}

fn complex(s: &Scalar, what: &str) -> Result<Complex64, CliError> {
    match s {
        Scalar::Int(i) => Ok(Complex64::new(*i as f64, 0.0)),
        Scalar::Float(x) => Ok(Complex64::new(*x, 0.0)),
        Scalar::Text(s) => parse_complex(s, what),
    }
}

fn parse_complex(s: &str, what: &str) -> Result<Complex64, CliError> {
    let z = Complex64::from_str(s.trim())
        .map_err(|_| CliError::parse("spec.bad_number", format!("{what}: cannot read '{s}' as a complex number"), None))?;
    if !z.is_finite() {
        return Err(CliError::validation("spec.non_finite", format!("{what}: '{s}' is not finite")));
    }
    Ok(z)
}

fn real(s: &Scalar, what: &str) -> Result<f64, CliError> {
    let x = match s {
        Scalar::Int(i) => *i as f64,
        Scalar::Float(x) => *x,
        Scalar::Text(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::parse("spec.bad_number", format!("{what}: cannot read '{s}' as a real number"), None))?,
    };
    if !x.is_finite() {
        return Err(CliError::validation("spec.non_finite", format!("{what}: {x} is not finite")));
    }
    Ok(x)
}

/// Comma-separated complex list, e.g. `0.01,0.002` or `0.1+0.2i`.
pub fn parse_t_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',').map(|s| parse_complex(s, "--t")).collect()
}

/// `auto` or a comma-separated real list.
pub fn parse_rho(text: &str) -> Result<RhoSetting, CliError> {
    if text.trim().eq_ignore_ascii_case("auto") {
        return Ok(RhoSetting::Auto);
    }
    text.split(',')
        .map(|s| real(&Scalar::Text(s.to_string()), "--rho"))
        .collect::<Result<Vec<_>, _>>()
        .map(RhoSetting::Given)
}

/// Integer matrix as text: one row per line, entries separated by
/// whitespace or commas; `#` starts a comment.
pub fn parse_matrix_text(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let row = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<i64>().map_err(|_| {
                    let col = line.find(s).map_or(1, |k| line[..k].chars().count() + 1);
                    CliError::parse("spec.matrix", format!("'{s}' is not an integer"), Some((i + 1, col)))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !row.is_empty() {
            rows.push(row);
        }
    }
    Ok(rows)
}

fn matrix_from_rows(rows: &[Vec<i64>], n: usize) -> Result<IntMatrix, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::validation(
            "spec.matrix_shape",
            format!("matrix must be {n} x {n} to match the variables"),
        ));
    }
    Ok(IntMatrix::from_rows(rows)?)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl ProblemSpec {
    /// Reads a TOML spec and applies the overrides.
    pub fn from_toml(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| {
            let pos = e.span().map(|s| {
                let before = &text[..s.start.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
                (line, col)
            });
            CliError::parse("spec.syntax", e.message().to_string(), pos)
        })?;
        Self::from_raw(raw, overrides)
    }

    fn from_raw(raw: RawSpec, overrides: &Overrides) -> Result<Self, CliError> {
        if raw.variables.is_empty() {
            return Err(CliError::validation("spec.variables", "at least one variable is required"));
        }
        for (i, v) in raw.variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(CliError::validation("spec.variables", format!("'{v}' is not a valid variable name")));
            }
            if raw.variables[..i].contains(v) {
                return Err(CliError::validation("spec.variables", format!("variable '{v}' is declared twice")));
            }
        }
        let n = raw.variables.len();
        let vars = variables(&raw.variables);
        let function = parse_expression(&raw.function, &vars).map_err(|e| CliError::from(e).context("function"))?;

        if raw.directions.len() > n {
            return Err(CliError::validation(
                "spec.directions",
                format!("{} directions for {n} variables", raw.directions.len()),
            ));
        }
        for q in &raw.directions {
            if q.len() != n {
                return Err(CliError::validation(
                    "spec.directions",
                    format!("direction {q:?} has length {}, expected {n}", q.len()),
                ));
            }
        }
        let directions = raw.directions.into_iter().map(ExponentVector::new).collect();

        let t = match &overrides.t {
            Some(text) => Some(parse_t_list(text)?),
            None => raw
                .t
                .map(|list| list.iter().map(|s| complex(s, "t")).collect::<Result<Vec<_>, _>>())
                .transpose()?,
        };
        let rho = match &overrides.rho {
            Some(text) => parse_rho(text)?,
            None => match raw.rho {
                None => RhoSetting::Auto,
                Some(RhoField::Text(s)) => parse_rho(&s)?,
                Some(RhoField::List(l)) => {
                    RhoSetting::Given(l.iter().map(|s| real(s, "rho")).collect::<Result<_, _>>()?)
                }
            },
        };
        if let RhoSetting::Given(r) = &rho {
            if r.len() != n {
                return Err(CliError::validation("spec.rho", format!("rho has {} entries, expected {n}", r.len())));
            }
        }
        let matrix = match &overrides.matrix {
            Some(text) => Some(matrix_from_rows(&parse_matrix_text(text)?, n)?),
            None => raw.matrix.as_deref().map(|m| matrix_from_rows(m, n)).transpose()?,
        };

        let tol = overrides.tol.or(raw.quadrature.tol).unwrap_or(DEFAULT_TOL);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::validation("spec.tol", format!("tol must be positive, got {tol}")));
        }
        let n_max = overrides.n_max.or(raw.quadrature.n_max).unwrap_or(DEFAULT_N_MAX);
        if !(8..=MAX_NODES).contains(&n_max) {
            return Err(CliError::validation(
                "spec.n_max",
                format!("n_max must lie in [8, {MAX_NODES}], got {n_max}"),
            ));
        }
        Ok(ProblemSpec {
            function_text: raw.function,
            vars,
            function,
            directions,
            t,
            rho,
            matrix,
            tol,
            n_max,
            series_order: raw.series.order.unwrap_or(DEFAULT_SERIES_ORDER),
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
}
