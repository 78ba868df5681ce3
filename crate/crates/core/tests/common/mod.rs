#![allow(dead_code)]

use diagint_core::laurent::{ratio, variables};
use diagint_core::{ExponentVector, IntMatrix, LaurentPolynomial, RationalFunction};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn ev(v: &[i64]) -> ExponentVector {
    ExponentVector::new(v.to_vec())
}

pub fn poly(names: &[&str], terms: &[(&[i64], i64)]) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        variables(names),
        terms.iter().map(|(e, c)| (ev(e), ratio(*c, 1))),
    )
    .unwrap()
}

pub fn reciprocal(den: LaurentPolynomial) -> RationalFunction {
    RationalFunction::new(LaurentPolynomial::one(den.vars().clone()), den).unwrap()
}

/// 1/(1 + z1 + z2 + z3 + z2 z3)
pub fn worked_f() -> RationalFunction {
    reciprocal(poly(
        &["z1", "z2", "z3"],
        &[(&[0, 0, 0], 1), (&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 1), (&[0, 1, 1], 1)],
    ))
}

/// 1/(1 - z1 - z2)
pub fn binomial_f() -> RationalFunction {
    reciprocal(poly(&["z1", "z2"], &[(&[0, 0], 1), (&[1, 0], -1), (&[0, 1], -1)]))
}

/// 1/(1 - z1 - z2 - z3)
pub fn trinomial_f() -> RationalFunction {
    reciprocal(poly(
        &["z1", "z2", "z3"],
        &[(&[0, 0, 0], 1), (&[1, 0, 0], -1), (&[0, 1, 0], -1), (&[0, 0, 1], -1)],
    ))
}

pub fn worked_a() -> IntMatrix {
    IntMatrix::from_rows(&[vec![1, 1, 0], vec![1, 2, 0], vec![1, 2, 1]]).unwrap()
}

pub fn worked_a_inv() -> IntMatrix {
    IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 1, 0], vec![0, -1, 1]]).unwrap()
}

pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Random unimodular matrix as a product of elementary integer operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        let op = rng.gen_range(0..3);
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match op {
            0 if i != j => m.swap(i, j),
            1 => m[i].iter_mut().for_each(|x| *x = -*x),
            _ if i != j => {
                let c = rng.gen_range(-2..=2);
                let src = m[j].clone();
                for (x, s) in m[i].iter_mut().zip(src) {
                    *x += c * s;
                }
            }
            _ => {}
        }
    }
    IntMatrix::from_rows(&m).unwrap()
}

/// Random nonzero complex number with modulus in [lo, hi].
pub fn random_complex<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Barycentric solve of `target` against an affinely independent `simplex`;
/// `None` if dependent or if `target` is outside the affine span.
fn barycentric(target: &[i64], simplex: &[&Vec<i64>]) -> Option<Vec<Rational64>> {
    let d = target.len();
    let k = simplex.len();
    // rows: coordinates plus the affine row; columns: simplex points, rhs
    let mut m: Vec<Vec<Rational64>> = (0..=d)
        .map(|r| {
            let mut row: Vec<Rational64> = simplex
                .iter()
                .map(|p| if r < d { Rational64::from(p[r]) } else { Rational64::one() })
                .collect();
            row.push(if r < d { Rational64::from(target[r]) } else { Rational64::one() });
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(r) = (pivot_row..=d).find(|&r| !m[r][col].is_zero()) else {
            return None;
        };
        m.swap(pivot_row, r);
        let pv = m[pivot_row][col];
        for x in m[pivot_row].iter_mut() {
            *x /= pv;
        }
        for r in 0..=d {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col];
                let src = m[pivot_row].clone();
                for (x, s) in m[r].iter_mut().zip(src) {
                    *x -= f * s;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if (pivot_row..=d).any(|r| !m[r][k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| m[i][k]).collect())
}

fn subsets<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for it in items {
        let mut more = Vec::new();
        for s in &out {
            if s.len() < max {
                let mut t = s.clone();
                t.push(it.clone());
                more.push(t);
            }
        }
        out.extend(more);
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Vertices by Carathéodory: a point is redundant iff it is a convex
/// combination of at most `d + 1` affinely independent other points.
pub fn caratheodory_vertices(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let d = pts.first().map_or(0, |p| p.len());
    let mut out: Vec<Vec<i64>> = pts
        .iter()
        .filter(|p| {
            let others: Vec<&Vec<i64>> = pts.iter().filter(|q| q != p).collect();
            !subsets(&others, d + 1).iter().any(|s| {
                barycentric(p, s).is_some_and(|l| l.iter().all(|x| !x.is_negative()))
            })
        })
        .cloned()
        .collect();
    out.sort();
    out
}
