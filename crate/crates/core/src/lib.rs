//! Integral representations of one-sided diagonals of rational power series.
//!
//! Given `F = P/Q` with `Q(0) ≠ 0` and primitive directions
//! `q⁽¹⁾,…,q⁽ᵖ⁾ ∈ Z^n_+`, the diagonal
//! `d_q(t) = Σ_{l ∈ Z^p_+} c_{l₁q⁽¹⁾+…+l_pq⁽ᵖ⁾} t^l` is an `n`-fold torus
//! integral. Completing the directions to a unimodular `A` and substituting
//! `z = w^{A⁻¹}` lowers it to an `(n − p)`-fold integral of the rational
//! function `F[(t, w')^{A⁻¹}]`.
//!
//! - [`lattice`]: exact integer matrices and unimodular completion
//! - [`laurent`]: sparse Laurent polynomials and monomial substitution
//! - [`newton`]: Newton polytopes and contour admissibility
//! - [`series`]: exact Taylor coefficients and diagonal extraction
//! - [`reduction`]: the reduction pipeline and its exact checks
//! - [`quadrature`]: trapezoid evaluation of both integrals

mod feasibility;
pub mod lattice;
pub mod laurent;
pub mod newton;
pub mod quadrature;
pub mod reduction;
pub mod series;

pub use lattice::{DiagonalSpec, ExponentVector, IntMatrix, LatticeError};
pub use laurent::{AlgebraError, LaurentPolynomial, Rational, RationalFunction, Variables};
pub use newton::{Certificate, Contour, DominanceReport, GeometryError, Polytope};
pub use quadrature::{QuadratureError, QuadratureResult};
pub use reduction::{ReducedRepresentation, ReductionError, RhoChoice, VerificationReport};
pub use series::{CoefficientTable, PartialSum, SeriesError};
