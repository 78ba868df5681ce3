//! Newton polytopes, their linear images and coordinate projections, and
//! admissibility of torus contours `Log^{-1}(ρ)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::feasibility::nonnegative_solution_exists;
use crate::laurent::{rational_to_f64, LaurentPolynomial, NumericLaurent};
use crate::lattice::{DiagonalSpec, ExponentVector, IntMatrix, LatticeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("coordinate index {index} out of range for dimension {dim}")]
    BadIndex { index: usize, dim: usize },
    #[error("polynomial has no constant term; only the Taylor component is supported")]
    NotTaylor,
    #[error("polynomial has negative exponents; expected a polynomial")]
    NotPolynomial,
    #[error("contour entries must be finite")]
    NonFinite,
    #[error("no radius on the ray -s(1,..,1), s in {{1/4,..,64}}, passes the dominance test; supply rho manually")]
    RhoSearchFailed,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Convex hull of finitely many integer points, stored as its vertex set in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<ExponentVector>,
}

impl Polytope {
    /// Hull of `points`; redundant points are removed.
    pub fn hull<I>(dim: usize, points: I) -> Result<Self, GeometryError>
    where
        I: IntoIterator<Item = ExponentVector>,
    {
        let set: BTreeSet<ExponentVector> = points.into_iter().collect();
        for p in &set {
            if p.len() != dim {
                return Err(GeometryError::Dimension {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let vertices = hull_vertices(&set.into_iter().collect::<Vec<_>>());
        Ok(Polytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: &ExponentVector) -> bool {
        self.vertices.binary_search(v).is_ok()
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "conv{{{}}}", vs.join(", "))
    }
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// True iff `target` is a convex combination of `others`.
pub(crate) fn in_convex_hull(target: &ExponentVector, others: &[&ExponentVector]) -> bool {
    if others.is_empty() {
        return false;
    }
    let columns: Vec<Vec<BigRational>> = others
        .iter()
        .map(|p| {
            let mut c: Vec<BigRational> = p.entries().iter().map(|&x| big(x)).collect();
            c.push(BigRational::one());
            c
        })
        .collect();
    let mut b: Vec<BigRational> = target.entries().iter().map(|&x| big(x)).collect();
    b.push(BigRational::one());
    nonnegative_solution_exists(&columns, &b)
}

/// Extreme points of a duplicate-free point set, sorted.
fn hull_vertices(points: &[ExponentVector]) -> Vec<ExponentVector> {
    let mut out: Vec<ExponentVector> = points
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<&ExponentVector> = points
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, q)| q)
                .collect();
            !in_convex_hull(p, &others)
        })
        .map(|(_, p)| p.clone())
        .collect();
    out.sort();
    out
}

pub fn newton_polytope(p: &LaurentPolynomial) -> Result<Polytope, GeometryError> {
    if p.is_zero() {
        return Err(GeometryError::ZeroPolynomial);
    }
    Polytope::hull(p.nvars(), p.terms().map(|(e, _)| e.clone()))
}

/// Hull of the images `B v` of the vertices.
pub fn map_polytope(poly: &Polytope, b: &IntMatrix) -> Result<Polytope, GeometryError> {
    if b.dim() != poly.dim {
        return Err(GeometryError::Dimension {
            expected: poly.dim,
            found: b.dim(),
        });
    }
    let images = poly
        .vertices
        .iter()
        .map(|v| b.apply(v))
        .collect::<Result<Vec<_>, _>>()?;
    Polytope::hull(poly.dim, images)
}

/// Deletes the listed coordinates (0-based) and takes the hull.
pub fn project_polytope(poly: &Polytope, drop: &[usize]) -> Result<Polytope, GeometryError> {
    for &i in drop {
        if i >= poly.dim {
            return Err(GeometryError::BadIndex {
                index: i,
                dim: poly.dim,
            });
        }
    }
    let keep: Vec<usize> = (0..poly.dim).filter(|i| !drop.contains(i)).collect();
    Polytope::hull(
        keep.len(),
        poly.vertices
            .iter()
            .map(|v| ExponentVector::new(keep.iter().map(|&k| v[k]).collect())),
    )
}

/// A real torus `Log^{-1}(ρ)`, described by its log-radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    rho: Vec<f64>,
}

impl Contour {
    pub fn new(rho: Vec<f64>) -> Result<Self, GeometryError> {
        if rho.iter().any(|r| !r.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Contour { rho })
    }

    pub fn diagonal(n: usize, value: f64) -> Result<Self, GeometryError> {
        Self::new(vec![value; n])
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.len()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.rho.iter().map(|r| r.exp()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// Constant term dominates: the closed torus region is free of zeros and
    /// `ρ` lies in the component of the amoeba complement with order zero.
    Pass,
    /// Dominance fails; says nothing about membership.
    Inconclusive,
}

impl Certificate {
    pub fn is_pass(&self) -> bool {
        matches!(self, Certificate::Pass)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Certificate::Pass => "PASS",
            Certificate::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Outcome of the coefficient-dominance test
/// `|c_0| > Σ_{α≠0} |c_α| e^{⟨α,ρ⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub status: Certificate,
    pub constant: f64,
    pub tail: f64,
    /// `constant - tail`; positive iff PASS.
    pub margin: f64,
}

fn dominance<I>(constant: f64, tail_terms: I) -> DominanceReport
where
    I: IntoIterator<Item = f64>,
{
    let tail: f64 = tail_terms.into_iter().sum();
    let margin = constant - tail;
    DominanceReport {
        status: if margin > 0.0 {
            Certificate::Pass
        } else {
            Certificate::Inconclusive
        },
        constant,
        tail,
        margin,
    }
}

/// Dominance certificate for `ρ ∈ E₀` of a polynomial with `Q(0) ≠ 0`.
pub fn rho_in_e0(q: &LaurentPolynomial, c: &Contour) -> Result<DominanceReport, GeometryError> {
    if !q.has_nonnegative_exponents() {
        return Err(GeometryError::NotPolynomial);
    }
    laurent_dominance(q, c)
}

/// Dominance test for a Laurent polynomial: certifies that `ρ` lies in the
/// amoeba-complement component whose order is the origin.
pub fn laurent_dominance(
    q: &LaurentPolynomial,
    c: &Contour,
) -> Result<DominanceReport, GeometryError> {
    if c.dim() != q.nvars() {
        return Err(GeometryError::Dimension {
            expected: q.nvars(),
            found: c.dim(),
        });
    }
    let c0 = q.constant_term();
    if c0.is_zero() {
        return Err(GeometryError::NotTaylor);
    }
    Ok(dominance(
        rational_to_f64(&c0).abs(),
        q.terms()
            .filter(|(e, _)| !e.is_zero())
            .map(|(e, a)| rational_to_f64(a).abs() * e.dot_f64(c.rho()).exp()),
    ))
}

/// Dominance test for a floating Laurent polynomial (e.g. a denominator
/// with parameters already bound).
pub fn numeric_dominance(
    q: &NumericLaurent,
    c: &Contour,
) -> Result<DominanceReport, GeometryError> {
    if c.dim() != q.nvars() {
        return Err(GeometryError::Dimension {
            expected: q.nvars(),
            found: c.dim(),
        });
    }
    let c0 = q.constant_term();
    if c0 == Complex64::zero() {
        return Err(GeometryError::NotTaylor);
    }
    Ok(dominance(
        c0.norm(),
        q.terms()
            .iter()
            .filter(|(e, _)| e.iter().any(|&k| k != 0))
            .map(|(e, a)| {
                let s: f64 = e.iter().zip(c.rho()).map(|(&k, r)| k as f64 * r).sum();
                a.norm() * s.exp()
            }),
    ))
}

/// Radii `e^{⟨q⁽ⁱ⁾,ρ⟩}` bounding the diagonal parameters.
pub fn t_bounds(spec: &DiagonalSpec, c: &Contour) -> Result<Vec<f64>, GeometryError> {
    if c.dim() != spec.ambient_dim() {
        return Err(GeometryError::Dimension {
            expected: spec.ambient_dim(),
            found: c.dim(),
        });
    }
    Ok(spec
        .directions()
        .iter()
        .map(|q| q.dot_f64(c.rho()).exp())
        .collect())
}

/// Strict check `|t_i| < e^{⟨q⁽ⁱ⁾,ρ⟩}` for every `i`.
pub fn check_t_bounds(
    spec: &DiagonalSpec,
    c: &Contour,
    t: &[Complex64],
) -> Result<bool, GeometryError> {
    if t.len() != spec.rank() {
        return Err(GeometryError::Dimension {
            expected: spec.rank(),
            found: t.len(),
        });
    }
    let bounds = t_bounds(spec, c)?;
    Ok(t.iter().zip(&bounds).all(|(ti, b)| ti.norm() < *b))
}

/// Scales searched by [`find_rho`], smallest first.
pub const RHO_SEARCH_GRID: [f64; 9] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

/// First `ρ = -s(1,…,1)` on the search grid that passes dominance.
pub fn find_rho(q: &LaurentPolynomial) -> Result<Contour, GeometryError> {
    for s in RHO_SEARCH_GRID {
        let c = Contour::diagonal(q.nvars(), -s)?;
        if rho_in_e0(q, &c)?.status == Certificate::Pass {
            return Ok(c);
        }
    }
    Err(GeometryError::RhoSearchFailed)
}
