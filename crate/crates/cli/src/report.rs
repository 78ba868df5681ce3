//! JSON report pieces. Field order is declaration order and floats are
//! written with 17 significant digits, so identical inputs give identical
//! bytes.

use diagint_core::reduction::VerificationReport;
use diagint_core::{DominanceReport, ExponentVector, IntMatrix, LaurentPolynomial, Polytope, QuadratureResult};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::CliError;

/// `x` with 17 significant digits in exponent form, e.g. `1.2909944487358056e0`.
pub fn format17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float written with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn f17s(xs: &[f64]) -> Vec<F17> {
    xs.iter().copied().map(F17).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: F17,
    pub im: F17,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        ComplexJson {
            re: F17(z.re),
            im: F17(z.im),
        }
    }
}

/// An exact integer of any size, written as a JSON number.
#[derive(Debug, Clone, PartialEq)]
pub struct BigIntJson(pub String);

impl Serialize for BigIntJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.0.clone()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn matrix_json(m: &IntMatrix) -> Vec<Vec<BigIntJson>> {
    m.rows()
        .iter()
        .map(|r| r.iter().map(|x| BigIntJson(x.to_string())).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermJson {
    pub exponent: Vec<i64>,
    /// Exact rational as text, `p` or `p/q`.
    pub coefficient: String,
}

pub fn terms_json(p: &LaurentPolynomial) -> Vec<TermJson> {
    p.terms()
        .map(|(e, c)| TermJson {
            exponent: e.entries().to_vec(),
            coefficient: c.to_string(),
        })
        .collect()
}

pub fn vertices_json(p: &Polytope) -> Vec<Vec<i64>> {
    p.vertices().iter().map(|v| v.entries().to_vec()).collect()
}

pub fn vectors_json(vs: &[ExponentVector]) -> Vec<Vec<i64>> {
    vs.iter().map(|v| v.entries().to_vec()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateJson {
    pub status: &'static str,
    pub constant: F17,
    pub tail: F17,
    pub margin: F17,
}

impl From<&DominanceReport> for CertificateJson {
    fn from(d: &DominanceReport) -> Self {
        CertificateJson {
            status: d.status.as_str(),
            constant: F17(d.constant),
            tail: F17(d.tail),
            margin: F17(d.margin),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckJson {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationJson {
    pub all_passed: bool,
    /// Whether the direction cone lies in the positive orthant; when false
    /// the reduced integral may include coefficients outside the diagonal.
    pub one_sided_cone: bool,
    pub checks: Vec<CheckJson>,
}

impl From<&VerificationReport> for VerificationJson {
    fn from(v: &VerificationReport) -> Self {
        VerificationJson {
            all_passed: v.all_passed(),
            one_sided_cone: v.one_sided_cone,
            checks: v
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name,
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureJson {
    pub value: ComplexJson,
    pub nodes_per_dim: usize,
    pub est_error: F17,
    pub evaluations: usize,
    pub converged: Option<bool>,
}

impl From<&QuadratureResult> for QuadratureJson {
    fn from(q: &QuadratureResult) -> Self {
        QuadratureJson {
            value: q.value.into(),
            nodes_per_dim: q.nodes_per_dim,
            est_error: F17(q.est_error),
            evaluations: q.evaluations,
            converged: q.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorJson<'a> {
    pub code: &'a str,
    pub message: &'a str,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport<'a> {
    pub command: &'a str,
    pub error: ErrorJson<'a>,
}

pub fn error_report(command: &str, e: &CliError) -> String {
    let r = ErrorReport {
        command,
        error: ErrorJson {
            code: &e.code,
            message: &e.message,
            line: e.position.map(|p| p.0),
            column: e.position.map(|p| p.1),
        },
    };
    to_json(&r).unwrap_or_else(|_| format!("{{\"command\":\"{command}\",\"error\":{{\"code\":\"internal.serialize\"}}}}\n"))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::validation("internal.serialize", e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Plot data: a `# name` header, then one `(a,b,…)` tuple per line.
pub fn plot_data(sections: &[(&str, &Polytope)]) -> String {
    let mut out = String::new();
    for (name, p) in sections {
        out.push_str(&format!("# {name}\n"));
        for v in p.vertices() {
            out.push_str(&format!("{v}\n"));
        }
    }
    out
}
