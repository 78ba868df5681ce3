//! Structured CLI errors: a stable dotted code, a message and an exit class.

use std::fmt;

use diagint_core::laurent::AlgebraError;
use diagint_core::series::SeriesError;
use diagint_core::{GeometryError, LatticeError, QuadratureError, ReductionError};

use crate::parse::ParseError;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    Validation = 2,
    NonConvergence = 3,
    Parse = 4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub class: ExitClass,
    /// Position for parse errors.
    pub position: Option<(usize, usize)>,
}

impl CliError {
    pub fn validation(code: impl Into<String>, message: impl Into<String>) -> Self {
        CliError {
            code: code.into(),
            message: message.into(),
            class: ExitClass::Validation,
            position: None,
        }
    }

    pub fn parse(code: impl Into<String>, message: impl Into<String>, position: Option<(usize, usize)>) -> Self {
        CliError {
            code: code.into(),
            message: message.into(),
            class: ExitClass::Parse,
            position,
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.class as u8
    }

    /// Prefixes the message with where the error happened.
    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((l, c)) => write!(f, "[{}] {l}:{c}: {}", self.code, self.message),
            None => write!(f, "[{}] {}", self.code, self.message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::parse(e.kind.code(), e.message, Some((e.line, e.column)))
    }
}

fn lattice_code(e: &LatticeError) -> &'static str {
    match e {
        LatticeError::Dimension { .. } => "lattice.dimension",
        LatticeError::Empty => "lattice.empty",
        LatticeError::Rank { .. } => "lattice.rank",
        LatticeError::NotCompletable { .. } => "lattice.not_completable",
        LatticeError::NegativeDeterminant => "lattice.negative_determinant",
        LatticeError::NotUnimodular { .. } => "lattice.not_unimodular",
        LatticeError::Overflow(_) => "lattice.overflow",
        LatticeError::BadOverride(_) => "lattice.bad_override",
    }
}

fn algebra_code(e: &AlgebraError) -> &'static str {
    match e {
        AlgebraError::Lattice(l) => lattice_code(l),
        AlgebraError::VariableMismatch { .. } => "algebra.variable_mismatch",
        AlgebraError::Dimension { .. } => "algebra.dimension",
        AlgebraError::ZeroToNegativePower(_) => "algebra.zero_to_negative_power",
        AlgebraError::UnknownVariable(_) => "algebra.unknown_variable",
        AlgebraError::ZeroDenominator => "algebra.zero_denominator",
        AlgebraError::Overflow => "algebra.overflow",
    }
}

fn geometry_code(e: &GeometryError) -> &'static str {
    match e {
        GeometryError::Lattice(l) => lattice_code(l),
        GeometryError::ZeroPolynomial => "geometry.zero_polynomial",
        GeometryError::Dimension { .. } => "geometry.dimension",
        GeometryError::BadIndex { .. } => "geometry.bad_index",
        GeometryError::NotTaylor => "geometry.not_taylor",
        GeometryError::NotPolynomial => "geometry.not_polynomial",
        GeometryError::NonFinite => "geometry.non_finite",
        GeometryError::RhoSearchFailed => "geometry.rho_search_failed",
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::validation(lattice_code(&e), e.to_string())
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::validation(algebra_code(&e), e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::validation(geometry_code(&e), e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        let code = match &e {
            SeriesError::NotTaylor => "series.not_taylor",
            SeriesError::NotPolynomial => "series.not_polynomial",
            SeriesError::UnsupportedDirection(_) => "series.unsupported_direction",
            SeriesError::Dimension { .. } => "series.dimension",
            SeriesError::Overflow => "series.overflow",
        };
        CliError::validation(code, e.to_string())
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        let code = match &e {
            ReductionError::Lattice(l) => lattice_code(l),
            ReductionError::Algebra(a) => algebra_code(a),
            ReductionError::Geometry(g) => geometry_code(g),
            ReductionError::Dimension { .. } => "reduction.dimension",
            ReductionError::NotTaylor => "reduction.not_taylor",
        };
        CliError::validation(code, e.to_string())
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        let code = match &e {
            QuadratureError::BadNodeCount(_) => "quadrature.bad_node_count",
            QuadratureError::PoleOnContour { .. } => "quadrature.pole_on_contour",
            QuadratureError::InadmissibleParameter { .. } => "quadrature.inadmissible_parameter",
            QuadratureError::UncertifiedContour { .. } => "quadrature.uncertified_contour",
            QuadratureError::TooExpensive { .. } => "quadrature.too_expensive",
            QuadratureError::Dimension { .. } => "quadrature.dimension",
            QuadratureError::Geometry(g) => geometry_code(g),
            QuadratureError::Algebra(a) => algebra_code(a),
        };
        CliError::validation(code, e.to_string())
    }
}
