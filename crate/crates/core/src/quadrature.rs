//! Product trapezoid rule on real tori `|w_k| = r_k`.
//!
//! `(2πi)^{-k} ∫ g(w) dw/w` over a torus is the mean of `g` over it, and the
//! uniform-grid mean converges geometrically for the analytic periodic
//! integrands used here.

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::laurent::AlgebraError;
use crate::lattice::DiagonalSpec;
use crate::laurent::RationalFunction;
use crate::newton::{check_t_bounds, rho_in_e0, t_bounds, Contour, GeometryError};
use crate::reduction::ReducedRepresentation;

/// Largest ambient dimension accepted by [`eval_original`].
pub const MAX_ORIGINAL_DIM: usize = 4;
/// Largest node count per dimension accepted by the evaluators.
pub const MAX_NODES: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("node count must be even and at least 2, got {0}")]
    BadNodeCount(usize),
    #[error("integrand is not finite at node {node:?}: a pole lies on the contour")]
    PoleOnContour { node: Vec<usize> },
    #[error("|t_{index}| = {modulus} is not below the bound {bound}")]
    InadmissibleParameter {
        index: usize,
        modulus: f64,
        bound: f64,
    },
    #[error("contour is not certified to lie in the Taylor component (dominance margin {margin})")]
    UncertifiedContour { margin: f64 },
    #[error("{dim}-dimensional grid with {nodes} nodes per axis exceeds the limit (dimension <= {MAX_ORIGINAL_DIM}, nodes <= {MAX_NODES})")]
    TooExpensive { dim: usize, nodes: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub nodes_per_dim: usize,
    /// `|value_N − value_{N/2}|`.
    pub est_error: f64,
    pub evaluations: usize,
    /// Set by [`converge`]; `None` for single-grid evaluations.
    pub converged: Option<bool>,
}

/// Mean of `g` over the torus with the given radii on an `N^k` grid.
/// The `N/2` estimate reuses the even-indexed nodes.
pub fn torus_mean<G>(g: G, radii: &[f64], nodes: usize) -> Result<QuadratureResult, QuadratureError>
where
    G: Fn(&[Complex64]) -> Complex64 + Sync,
{
    if nodes < 2 || nodes % 2 != 0 {
        return Err(QuadratureError::BadNodeCount(nodes));
    }
    let k = radii.len();
    if k == 0 {
        let v = g(&[]);
        if !v.is_finite() {
            return Err(QuadratureError::PoleOnContour { node: vec![] });
        }
        return Ok(QuadratureResult {
            value: v,
            nodes_per_dim: nodes,
            est_error: 0.0,
            evaluations: 1,
            converged: None,
        });
    }
    let circle: Vec<Vec<Complex64>> = radii
        .iter()
        .map(|&r| {
            (0..nodes)
                .map(|j| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64))
                .collect()
        })
        .collect();
    let inner: usize = nodes.pow(k as u32 - 1);

    // one slab per first-axis index; slabs are combined in index order
    let slabs: Vec<Result<(Complex64, Complex64), QuadratureError>> = (0..nodes)
        .into_par_iter()
        .map(|i0| {
            let mut full = Complex64::zero();
            let mut half = Complex64::zero();
            let mut idx = vec![0usize; k];
            idx[0] = i0;
            let mut point = vec![Complex64::zero(); k];
            for flat in 0..inner {
                let mut rem = flat;
                for d in (1..k).rev() {
                    idx[d] = rem % nodes;
                    rem /= nodes;
                }
                for d in 0..k {
                    point[d] = circle[d][idx[d]];
                }
                let v = g(&point);
                if !v.is_finite() {
                    return Err(QuadratureError::PoleOnContour { node: idx.clone() });
                }
                full += v;
                if idx.iter().all(|i| i % 2 == 0) {
                    half += v;
                }
            }
            Ok((full, half))
        })
        .collect();

    let mut full = Complex64::zero();
    let mut half = Complex64::zero();
    for s in slabs {
        let (f, h) = s?;
        full += f;
        half += h;
    }
    let total = nodes.pow(k as u32);
    let value = full / total as f64;
    let coarse = half / (nodes / 2).pow(k as u32) as f64;
    Ok(QuadratureResult {
        value,
        nodes_per_dim: nodes,
        est_error: (value - coarse).norm(),
        evaluations: total,
        converged: None,
    })
}

fn check_parameters(bounds: &[f64], t: &[Complex64]) -> Result<(), QuadratureError> {
    if bounds.len() != t.len() {
        return Err(QuadratureError::Dimension {
            expected: bounds.len(),
            found: t.len(),
        });
    }
    for (i, (ti, &b)) in t.iter().zip(bounds).enumerate() {
        if !(ti.norm() < b) {
            return Err(QuadratureError::InadmissibleParameter {
                index: i + 1,
                modulus: ti.norm(),
                bound: b,
            });
        }
    }
    Ok(())
}

/// The `n`-dimensional integral of `F(z) Π z^{q⁽ⁱ⁾}/(z^{q⁽ⁱ⁾} − t_i)` over
/// `Log⁻¹(ρ)`, normalised by `(2πi)^n`.
pub fn eval_original(
    f: &RationalFunction,
    spec: &DiagonalSpec,
    t: &[Complex64],
    c: &Contour,
    nodes: usize,
) -> Result<QuadratureResult, QuadratureError> {
    let n = spec.ambient_dim();
    if f.nvars() != n || c.dim() != n {
        return Err(QuadratureError::Dimension {
            expected: n,
            found: if f.nvars() != n { f.nvars() } else { c.dim() },
        });
    }
    if n > MAX_ORIGINAL_DIM || nodes > MAX_NODES {
        return Err(QuadratureError::TooExpensive { dim: n, nodes });
    }
    let cert = rho_in_e0(f.denominator(), c)?;
    if !cert.status.is_pass() {
        return Err(QuadratureError::UncertifiedContour {
            margin: cert.margin,
        });
    }
    if !check_t_bounds(spec, c, t)? {
        check_parameters(&t_bounds(spec, c)?, t)?;
    }
    let numeric = f.to_numeric()?;
    let directions: Vec<Vec<i32>> = spec
        .directions()
        .iter()
        .map(|q| q.entries().iter().map(|&e| e as i32).collect())
        .collect();
    let integrand = |z: &[Complex64]| {
        let mut v = numeric.eval(z);
        for (q, ti) in directions.iter().zip(t) {
            let mut m = Complex64::new(1.0, 0.0);
            for (zk, &e) in z.iter().zip(q) {
                if e != 0 {
                    m *= zk.powi(e);
                }
            }
            v *= m / (m - ti);
        }
        v
    };
    torus_mean(integrand, &c.radii(), nodes)
}

/// The reduced integral over `Log⁻¹(ρ')` of the integrand with `t` bound.
/// With no integration variables left this is a direct evaluation.
pub fn eval_reduced(
    rep: &ReducedRepresentation,
    t: &[Complex64],
    nodes: usize,
) -> Result<QuadratureResult, QuadratureError> {
    if nodes > MAX_NODES {
        return Err(QuadratureError::TooExpensive {
            dim: rep.integration_dim(),
            nodes,
        });
    }
    if !rep.q_certificate.status.is_pass() {
        return Err(QuadratureError::UncertifiedContour {
            margin: rep.q_certificate.margin,
        });
    }
    check_parameters(&rep.t_bounds, t)?;
    let bound: Vec<(usize, Complex64)> = t.iter().copied().enumerate().collect();
    let numeric = rep.integrand.bind_numeric(&bound)?;
    torus_mean(|w| numeric.eval(w), &rep.rho_prime.radii(), nodes)
}

/// Doubles the node count from 8 until the error estimate drops below
/// `tol` or the next count would exceed `max_nodes`.
pub fn converge<E>(evaluator: E, tol: f64, max_nodes: usize) -> Result<QuadratureResult, QuadratureError>
where
    E: Fn(usize) -> Result<QuadratureResult, QuadratureError>,
{
    let mut nodes = 8;
    let mut last = evaluator(nodes)?;
    loop {
        if last.est_error < tol {
            last.converged = Some(true);
            return Ok(last);
        }
        nodes *= 2;
        if nodes > max_nodes {
            last.converged = Some(false);
            return Ok(last);
        }
        last = evaluator(nodes)?;
    }
}
