//! Lowering the integral for a one-sided diagonal from `n` to `n − p`
//! dimensions.
//!
//! With `A = (q⁽¹⁾,…,q⁽ⁿ⁾)` unimodular and `z = w^{A⁻¹}`, each direction
//! monomial `z^{q⁽ⁱ⁾}` becomes the coordinate `w_i`, the torus
//! `Log⁻¹(ρ)` maps onto `Log⁻¹(Aᵀρ)` (coordinate `i` has log-radius
//! `⟨q⁽ⁱ⁾,ρ⟩`), and the Cauchy formula in `w_1…w_p` leaves an integral over
//! `w_{p+1}…w_n` of `F[(t, w')^{A⁻¹}]`.

use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::feasibility::nonnegative_solution_exists;
use crate::laurent::{AlgebraError, LaurentPolynomial, RationalFunction, Rational, Variables};
use crate::lattice::{
    check_completion, complete_to_unimodular, det, inverse_unimodular, DiagonalSpec,
    ExponentVector, IntMatrix, LatticeError,
};
use crate::newton::{
    find_rho, map_polytope, newton_polytope, numeric_dominance, project_polytope, rho_in_e0,
    t_bounds, Contour, DominanceReport, GeometryError, Polytope,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("function has {found} variables but the directions live in dimension {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("denominator vanishes at the origin; only Taylor diagonals are supported")]
    NotTaylor,
}

/// How the original contour is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoChoice {
    Auto,
    Given(Contour),
}

/// The reduced integral representation of a one-sided diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedRepresentation {
    /// The original `F = P/Q` in `z` variables.
    pub function: RationalFunction,
    pub matrix: IntMatrix,
    pub inverse: IntMatrix,
    /// `F[(t, w')^{A⁻¹}]` in variables `t1…tp, w{p+1}…wn`.
    pub integrand: RationalFunction,
    pub rho: Contour,
    /// Log-radii of the remaining `n − p` integration variables.
    pub rho_prime: Contour,
    /// `e^{⟨q⁽ⁱ⁾,ρ⟩}`, strict upper bounds for `|t_i|`.
    pub t_bounds: Vec<f64>,
    /// Dominance certificate of the original denominator at `rho`.
    pub q_certificate: DominanceReport,
    pub rank: usize,
}

impl ReducedRepresentation {
    pub fn ambient_dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Dimension of the remaining torus integral.
    pub fn integration_dim(&self) -> usize {
        self.ambient_dim() - self.rank
    }

    /// `Q'(t, w')`, the substituted denominator.
    pub fn reduced_denominator(&self) -> &LaurentPolynomial {
        self.integrand.denominator()
    }

    pub fn parameters_admissible(&self, t: &[Complex64]) -> bool {
        t.len() == self.rank && t.iter().zip(&self.t_bounds).all(|(ti, b)| ti.norm() < *b)
    }
}

/// Names `t1…tp, w{p+1}…wn`.
pub fn reduced_variable_names(n: usize, p: usize) -> Variables {
    (0..n)
        .map(|i| {
            if i < p {
                format!("t{}", i + 1)
            } else {
                format!("w{}", i + 1)
            }
        })
        .collect()
}

/// Last `n − p` components of `Aᵀρ`, i.e. `⟨q⁽ʲ⁾,ρ⟩` for `j > p`.
pub fn transported_contour(c: &Contour, a: &IntMatrix, p: usize) -> Result<Contour, ReductionError> {
    if c.dim() != a.dim() {
        return Err(ReductionError::Dimension {
            expected: a.dim(),
            found: c.dim(),
        });
    }
    if p > a.dim() {
        return Err(LatticeError::Rank { rank: p, dim: a.dim() }.into());
    }
    let full = a.transpose_apply_f64(c.rho());
    Ok(Contour::new(full[p..].to_vec())?)
}

pub fn reduce(
    f: &RationalFunction,
    spec: &DiagonalSpec,
    rho: RhoChoice,
    matrix_override: Option<IntMatrix>,
) -> Result<ReducedRepresentation, ReductionError> {
    let n = spec.ambient_dim();
    if f.nvars() != n {
        return Err(ReductionError::Dimension {
            expected: n,
            found: f.nvars(),
        });
    }
    let q = f.denominator();
    if q.constant_term().is_zero() {
        return Err(ReductionError::NotTaylor);
    }
    let matrix = match matrix_override {
        Some(a) => {
            check_completion(spec, &a)?;
            a
        }
        None => complete_to_unimodular(spec)?,
    };
    let inverse = inverse_unimodular(&matrix)?;
    let p = spec.rank();
    let integrand = f.substitute(&inverse, reduced_variable_names(n, p))?;

    let rho = match rho {
        RhoChoice::Auto => find_rho(q)?,
        RhoChoice::Given(c) => {
            if c.dim() != n {
                return Err(ReductionError::Dimension {
                    expected: n,
                    found: c.dim(),
                });
            }
            c
        }
    };
    let q_certificate = rho_in_e0(q, &rho)?;
    let rho_prime = transported_contour(&rho, &matrix, p)?;
    let t_bounds = t_bounds(spec, &rho)?;
    Ok(ReducedRepresentation {
        function: f.clone(),
        matrix,
        inverse,
        integrand,
        rho,
        rho_prime,
        t_bounds,
        q_certificate,
        rank: p,
    })
}

/// Dominance certificate for `ρ'` of `Q'(t, ·)` at concrete parameters.
pub fn certify_reduced_contour(
    rep: &ReducedRepresentation,
    t: &[Complex64],
) -> Result<DominanceReport, ReductionError> {
    if t.len() != rep.rank {
        return Err(ReductionError::Dimension {
            expected: rep.rank,
            found: t.len(),
        });
    }
    let bound: Vec<(usize, Complex64)> = t.iter().copied().enumerate().collect();
    let q_prime = rep.reduced_denominator().bind_numeric(&bound)?;
    Ok(numeric_dominance(&q_prime, &rep.rho_prime)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// Whether every `l ∈ Z^p` with `Σ l_i q⁽ⁱ⁾ ≥ 0` already has `l ≥ 0`.
    /// When false, the reduced integral also collects Taylor coefficients
    /// at lattice points `Σ l_i q⁽ⁱ⁾` with some `l_i < 0`, so it can differ
    /// from the one-sided diagonal. Informational; not part of
    /// [`VerificationReport::all_passed`].
    pub one_sided_cone: bool,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// True iff `{l ∈ R^p : Σ l_i q⁽ⁱ⁾ ≥ 0} ⊆ R^p_+`. By Farkas' lemma this
/// holds iff every unit vector `e_i` is a nonnegative combination of the
/// rows of the `n × p` direction matrix.
pub fn directions_cone_is_one_sided(spec: &DiagonalSpec) -> bool {
    let p = spec.rank();
    let n = spec.ambient_dim();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|k| {
            spec.directions()
                .iter()
                .map(|q| Rational::from_integer(q[k].into()))
                .collect()
        })
        .collect();
    (0..p).all(|i| {
        let target: Vec<Rational> = (0..p)
            .map(|j| Rational::from_integer(i64::from(i == j).into()))
            .collect();
        nonnegative_solution_exists(&rows, &target)
    })
}

/// Exact checks of the change of variables behind a reduction.
pub fn verify_reduction(rep: &ReducedRepresentation, spec: &DiagonalSpec) -> VerificationReport {
    let n = rep.ambient_dim();
    let mut checks = Vec::new();

    let d = det(&rep.matrix);
    checks.push(Check {
        name: "det",
        passed: d == 1.into(),
        detail: format!("det A = {d}"),
    });

    let product = rep.matrix.mul(&rep.inverse);
    let identity = matches!(&product, Ok(m) if m.is_identity());
    checks.push(Check {
        name: "inverse",
        passed: identity,
        detail: match &product {
            Ok(m) => format!("A * A^-1 = {m}"),
            Err(e) => e.to_string(),
        },
    });

    // ⟨b⁽ⁱ⁾, q⁽ʲ⁾⟩ = δ_ij, rows of A⁻¹ against the directions
    let mut kronecker = spec.ambient_dim() == n;
    let mut collapse = kronecker;
    let mut collapse_detail = String::from("ok");
    if kronecker {
        let names = reduced_variable_names(n, 0);
        for (j, q) in spec.directions().iter().enumerate() {
            match rep.inverse.apply(q) {
                Ok(image) => {
                    if image != ExponentVector::unit(n, j) {
                        kronecker = false;
                    }
                }
                Err(_) => kronecker = false,
            }
            let monomial = LaurentPolynomial::monomial(names.clone(), q.clone(), Rational::from_integer(1.into()));
            let expected = LaurentPolynomial::monomial(
                names.clone(),
                ExponentVector::unit(n, j),
                Rational::from_integer(1.into()),
            );
            match monomial.monomial_substitute(&rep.inverse, names.clone()) {
                Ok(image) if image == expected => {}
                Ok(image) => {
                    collapse = false;
                    collapse_detail = format!("z^{q} maps to {image}, not w{}", j + 1);
                }
                Err(e) => {
                    collapse = false;
                    collapse_detail = e.to_string();
                }
            }
        }
    }
    checks.push(Check {
        name: "kronecker",
        passed: kronecker,
        detail: "<b^(i), q^(j)> = delta_ij".into(),
    });
    checks.push(Check {
        name: "monomial_collapse",
        passed: collapse,
        detail: collapse_detail,
    });

    let polytopes = newton_polytope(rep.function.denominator())
        .and_then(|np| map_polytope(&np, &rep.inverse))
        .and_then(|mapped| Ok((mapped, newton_polytope(rep.reduced_denominator())?)));
    checks.push(match polytopes {
        Ok((mapped, direct)) => Check {
            name: "polytope_image",
            passed: mapped == direct,
            detail: format!("A^-1(N_Q) = {mapped}; N(Q') = {direct}"),
        },
        Err(e) => Check {
            name: "polytope_image",
            passed: false,
            detail: e.to_string(),
        },
    });

    VerificationReport {
        checks,
        one_sided_cone: directions_cone_is_one_sided(spec),
    }
}

/// Newton polytopes `N_Q`, `A⁻¹(N_Q)` and the projection `N'` that drops the
/// first `p` coordinates.
pub fn reduction_polytopes(
    rep: &ReducedRepresentation,
) -> Result<(Polytope, Polytope, Polytope), GeometryError> {
    let np = newton_polytope(rep.function.denominator())?;
    let mapped = map_polytope(&np, &rep.inverse)?;
    let drop: Vec<usize> = (0..rep.rank).collect();
    let projected = project_polytope(&mapped, &drop)?;
    Ok((np, mapped, projected))
}
