//! Exact Taylor expansion of rational functions and extraction of one-sided
//! diagonals. This is the ground truth the integral evaluators are checked
//! against.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::laurent::{rational_to_f64, RationalFunction, Rational, Variables};
use crate::lattice::{DiagonalSpec, ExponentVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("denominator vanishes at the origin; no Taylor expansion")]
    NotTaylor,
    #[error("numerator or denominator has negative exponents")]
    NotPolynomial,
    #[error("direction {0} has a negative entry; only one-sided Taylor diagonals are supported")]
    UnsupportedDirection(ExponentVector),
    #[error("direction count or dimension does not match the function ({expected} vs {found})")]
    Dimension { expected: usize, found: usize },
    #[error("truncation degree overflows")]
    Overflow,
}

/// Taylor coefficients `c_α` for all `α ≥ 0` with `|α| ≤ degree_bound`.
/// Only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    vars: Variables,
    degree_bound: u64,
    coeffs: BTreeMap<ExponentVector, Rational>,
}

impl CoefficientTable {
    pub fn degree_bound(&self) -> u64 {
        self.degree_bound
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    /// `None` outside the truncation; zero for absent in-range exponents.
    pub fn get(&self, alpha: &ExponentVector) -> Option<Rational> {
        if !alpha.is_nonnegative() || alpha.total_degree() as u64 > self.degree_bound {
            return None;
        }
        Some(self.coeffs.get(alpha).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.coeffs.iter()
    }
}

/// All nonnegative exponent vectors of length `n` and total degree `d`, in
/// lexicographic order.
fn compositions(n: usize, d: u64) -> Vec<Vec<i64>> {
    fn rec(n: usize, d: u64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 1 {
            prefix.push(d as i64);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=d {
            prefix.push(k as i64);
            rec(n - 1, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Power-series long division `P/Q`, degree by degree:
/// `c_α = (p_α − Σ_{β≠0} q_β c_{α−β}) / q_0`.
pub fn taylor_coefficients(
    f: &RationalFunction,
    degree_bound: u64,
) -> Result<CoefficientTable, SeriesError> {
    let p = f.numerator();
    let q = f.denominator();
    if !p.has_nonnegative_exponents() || !q.has_nonnegative_exponents() {
        return Err(SeriesError::NotPolynomial);
    }
    let q0 = q.constant_term();
    if q0.is_zero() {
        return Err(SeriesError::NotTaylor);
    }
    let n = f.nvars();
    let q_tail: Vec<(&ExponentVector, &Rational)> =
        q.terms().filter(|(e, _)| !e.is_zero()).collect();

    let mut table: HashMap<Vec<i64>, Rational> = HashMap::new();
    for d in 0..=degree_bound {
        for alpha in compositions(n, d) {
            let key = ExponentVector::new(alpha);
            let mut acc = p.coefficient(&key);
            for (beta, qb) in &q_tail {
                if let Some(rest) = key.checked_sub(beta) {
                    if rest.is_nonnegative() {
                        if let Some(c) = table.get(rest.entries()) {
                            acc -= *qb * c;
                        }
                    }
                }
            }
            if !acc.is_zero() {
                table.insert(key.into_inner(), acc / &q0);
            }
        }
    }
    Ok(CoefficientTable {
        vars: f.vars().clone(),
        degree_bound,
        coeffs: table
            .into_iter()
            .map(|(k, v)| (ExponentVector::new(k), v))
            .collect(),
    })
}

fn check_directions(f: &RationalFunction, spec: &DiagonalSpec) -> Result<u64, SeriesError> {
    if spec.ambient_dim() != f.nvars() {
        return Err(SeriesError::Dimension {
            expected: f.nvars(),
            found: spec.ambient_dim(),
        });
    }
    for q in spec.directions() {
        if !q.is_nonnegative() {
            return Err(SeriesError::UnsupportedDirection(q.clone()));
        }
    }
    Ok(spec
        .directions()
        .iter()
        .map(|q| q.l1_norm())
        .max()
        .unwrap_or(0))
}

/// Multi-indices `l ∈ Z_+^p` with `|l| = m`, lexicographic.
fn shell(p: usize, m: u64) -> Vec<Vec<i64>> {
    compositions(p, m)
}

fn lattice_point(spec: &DiagonalSpec, l: &[i64]) -> Result<ExponentVector, SeriesError> {
    let n = spec.ambient_dim();
    let mut alpha = vec![0i64; n];
    for (li, q) in l.iter().zip(spec.directions()) {
        for (a, qk) in alpha.iter_mut().zip(q.entries()) {
            *a = qk
                .checked_mul(*li)
                .and_then(|x| a.checked_add(x))
                .ok_or(SeriesError::Overflow)?;
        }
    }
    Ok(ExponentVector::new(alpha))
}

/// `c_{l₁q⁽¹⁾+…+l_pq⁽ᵖ⁾}` for every `l ∈ Z_+^p` with `|l| ≤ order`, keyed by `l`.
pub fn diagonal_coefficients(
    f: &RationalFunction,
    spec: &DiagonalSpec,
    order: u64,
) -> Result<BTreeMap<Vec<i64>, Rational>, SeriesError> {
    let max_norm = check_directions(f, spec)?;
    let bound = order.checked_mul(max_norm).ok_or(SeriesError::Overflow)?;
    let table = taylor_coefficients(f, bound)?;
    let mut out = BTreeMap::new();
    for m in 0..=order {
        for l in shell(spec.rank(), m) {
            let alpha = lattice_point(spec, &l)?;
            let c = table.get(&alpha).expect("truncation covers every diagonal point");
            out.insert(l, c);
        }
    }
    Ok(out)
}

/// Truncated diagonal generating function.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSum {
    pub value: Complex64,
    pub order: u64,
    /// `|Σ_{|l|=order} c_{lq} t^l|`, the size of the last shell.
    pub last_shell: f64,
}

/// `Σ_{|l|≤order} c_{lq} t^l`.
pub fn diagonal_partial_sum(
    f: &RationalFunction,
    spec: &DiagonalSpec,
    t: &[Complex64],
    order: u64,
) -> Result<PartialSum, SeriesError> {
    if t.len() != spec.rank() {
        return Err(SeriesError::Dimension {
            expected: spec.rank(),
            found: t.len(),
        });
    }
    let coeffs = diagonal_coefficients(f, spec, order)?;
    let mut shells = vec![Complex64::zero(); order as usize + 1];
    for (l, c) in &coeffs {
        let mut term = Complex64::new(rational_to_f64(c), 0.0);
        for (ti, &li) in t.iter().zip(l) {
            term *= ti.powi(li as i32);
        }
        let m: i64 = l.iter().sum();
        shells[m as usize] += term;
    }
    Ok(PartialSum {
        value: shells.iter().sum(),
        order,
        last_shell: shells.last().map(|s| s.norm()).unwrap_or(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{ratio, variables, LaurentPolynomial};

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn catalan_like() -> RationalFunction {
        let v = variables(&["z1", "z2"]);
        RationalFunction::new(
            LaurentPolynomial::one(v.clone()),
            LaurentPolynomial::from_terms(
                v,
                [(ev(&[0, 0]), ratio(1, 1)), (ev(&[1, 0]), ratio(-1, 1)), (ev(&[0, 1]), ratio(-1, 1))],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn worked_f() -> RationalFunction {
        let v = variables(&["z1", "z2", "z3"]);
        RationalFunction::new(
            LaurentPolynomial::one(v.clone()),
            LaurentPolynomial::from_terms(
                v,
                [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, 1]]
                    .iter()
                    .map(|e| (ev(e), ratio(1, 1))),
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn binomial(n: u64, k: u64) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(1, 5), vec![vec![5]]);
        assert_eq!(compositions(2, 0), vec![vec![0, 0]]);
    }

    #[test]
    fn binomial_table() {
        let t = taylor_coefficients(&catalan_like(), 16).unwrap();
        for a in 0..=8u64 {
            for b in 0..=8u64 {
                assert_eq!(
                    t.get(&ev(&[a as i64, b as i64])).unwrap(),
                    ratio(binomial(a + b, a), 1)
                );
            }
        }
        assert_eq!(t.get(&ev(&[9, 8])), None);
        assert_eq!(t.get(&ev(&[-1, 0])), None);
    }

    #[test]
    fn worked_example_low_order() {
        let t = taylor_coefficients(&worked_f(), 2).unwrap();
        assert_eq!(t.get(&ev(&[0, 0, 0])).unwrap(), ratio(1, 1));
        assert_eq!(t.get(&ev(&[1, 0, 0])).unwrap(), ratio(-1, 1));
        // z2 z3 : -1 from the linear term, +2 from the square of (z2 + z3)
        assert_eq!(t.get(&ev(&[0, 1, 1])).unwrap(), ratio(1, 1));
    }

    #[test]
    fn constant_term_is_ratio_at_origin() {
        let v = variables(&["x"]);
        let f = RationalFunction::new(
            LaurentPolynomial::constant(v.clone(), ratio(3, 1)),
            LaurentPolynomial::from_terms(v, [(ev(&[0]), ratio(2, 1)), (ev(&[1]), ratio(1, 1))]).unwrap(),
        )
        .unwrap();
        let t = taylor_coefficients(&f, 3).unwrap();
        assert_eq!(t.get(&ev(&[0])).unwrap(), ratio(3, 2));
        assert_eq!(t.get(&ev(&[3])).unwrap(), ratio(-3, 16));
    }

    #[test]
    fn rejects_non_taylor() {
        let v = variables(&["x"]);
        let f = RationalFunction::new(
            LaurentPolynomial::one(v.clone()),
            LaurentPolynomial::variable(v.clone(), "x").unwrap(),
        )
        .unwrap();
        assert_eq!(taylor_coefficients(&f, 3), Err(SeriesError::NotTaylor));
        let g = RationalFunction::from_polynomial(LaurentPolynomial::variable(v, "x").unwrap().pow(-1).unwrap());
        assert_eq!(taylor_coefficients(&g, 3), Err(SeriesError::NotPolynomial));
    }

    #[test]
    fn central_binomial_diagonal() {
        let spec = DiagonalSpec::new(vec![ev(&[1, 1])]).unwrap();
        let d = diagonal_coefficients(&catalan_like(), &spec, 4).unwrap();
        let got: Vec<Rational> = (0..=4).map(|l| d[&vec![l]].clone()).collect();
        let want: Vec<Rational> = [1, 2, 6, 20, 70].iter().map(|&c| ratio(c, 1)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn worked_example_diagonal_origin() {
        let spec = DiagonalSpec::new(vec![ev(&[1, 1, 1]), ev(&[1, 2, 2])]).unwrap();
        let d = diagonal_coefficients(&worked_f(), &spec, 2).unwrap();
        assert_eq!(d[&vec![0, 0]], ratio(1, 1));
        // c_{(l,l,l)} = (-1)^l C(2l,l)^2 and c_{(l,2l,2l)} = (-1)^l C(3l,l)^2
        assert_eq!(d[&vec![1, 0]], ratio(-4, 1));
        assert_eq!(d[&vec![0, 1]], ratio(-9, 1));
        assert_eq!(d[&vec![0, 2]], ratio(225, 1));
    }

    #[test]
    fn negative_direction_rejected() {
        let spec = DiagonalSpec::new(vec![ev(&[1, -1])]).unwrap();
        assert!(matches!(
            diagonal_coefficients(&catalan_like(), &spec, 3),
            Err(SeriesError::UnsupportedDirection(_))
        ));
    }

    #[test]
    fn partial_sum_matches_closed_form() {
        let spec = DiagonalSpec::new(vec![ev(&[1, 1])]).unwrap();
        let t = [Complex64::new(0.1, 0.0)];
        let s = diagonal_partial_sum(&catalan_like(), &spec, &t, 30).unwrap();
        let exact = 1.0 / (1.0f64 - 0.4).sqrt();
        assert!((s.value.re - exact).abs() < 1e-10, "{}", s.value);
        assert!((s.value.re - 1.2909944487).abs() < 1e-10);
        let s0 = diagonal_partial_sum(&catalan_like(), &spec, &[Complex64::zero()], 5).unwrap();
        assert_eq!(s0.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn worked_example_partial_sum_golden() {
        // frozen from an independent exact-fraction expansion
        let spec = DiagonalSpec::new(vec![ev(&[1, 1, 1]), ev(&[1, 2, 2])]).unwrap();
        let t = [Complex64::new(0.01, 0.0), Complex64::new(0.002, 0.0)];
        let s = diagonal_partial_sum(&worked_f(), &spec, &t, 12).unwrap();
        assert!((s.value.re - 0.947_770_657_240_317_1).abs() < 1e-14, "{}", s.value);
        assert!(s.value.im.abs() < 1e-15);
        assert!((s.last_shell - 2.219_225_532_157_988_5e-11).abs() < 1e-20);
    }
}
