//! Exact integer lattice data: exponent vectors, square integer matrices,
//! primitivity and unimodular completion of diagonal directions.
//!
//! Matrix arithmetic (determinants, adjugates, completion) runs on
//! [`BigInt`]; exponent vectors hold `i64` entries and are checked on the
//! way back from big-integer results.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("empty vector or matrix")]
    Empty,
    #[error("diagonal rank {rank} is outside 1..={dim}")]
    Rank { rank: usize, dim: usize },
    #[error("directions cannot be completed to a unimodular matrix (gcd of maximal minors is {factor})")]
    NotCompletable { factor: BigInt },
    #[error("directions form a full basis with determinant -1; no completion has determinant +1")]
    NegativeDeterminant,
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },
    #[error("integer {0} does not fit an exponent")]
    Overflow(BigInt),
    #[error("override matrix does not extend the directions: {0}")]
    BadOverride(String),
}

/// Integer point of `Z^n`: a monomial exponent or a lattice direction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// Sum of absolute values.
    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|e| e.unsigned_abs()).sum()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    pub fn dot_f64(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum()
    }

    fn to_big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&e| BigInt::from(e)).collect()
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

fn to_i64(x: &BigInt) -> Result<i64, LatticeError> {
    x.to_i64().ok_or_else(|| LatticeError::Overflow(x.clone()))
}

/// Square integer matrix. Column `j` is read as the `j`-th basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    // row-major
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LatticeError> {
        let n = rows.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LatticeError::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { n, data })
    }

    pub fn from_columns(cols: &[ExponentVector]) -> Result<Self, LatticeError> {
        let n = cols.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(LatticeError::Dimension {
                    expected: n,
                    found: c.len(),
                });
            }
            for i in 0..n {
                m.data[i * n + j] = BigInt::from(c[i]);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Result<ExponentVector, LatticeError> {
        (0..self.n)
            .map(|i| to_i64(self.get(i, j)))
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }

    pub fn row(&self, i: usize) -> Result<ExponentVector, LatticeError> {
        (0..self.n)
            .map(|j| to_i64(self.get(i, j)))
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }

    pub fn columns(&self) -> Result<Vec<ExponentVector>, LatticeError> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.n != other.n {
            return Err(LatticeError::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Exact product `self * v`.
    pub fn apply(&self, v: &ExponentVector) -> Result<ExponentVector, LatticeError> {
        if v.len() != self.n {
            return Err(LatticeError::Dimension {
                expected: self.n,
                found: v.len(),
            });
        }
        let vb = v.to_big();
        (0..self.n)
            .map(|i| {
                let acc: BigInt = (0..self.n).map(|k| self.get(i, k) * &vb[k]).sum();
                to_i64(&acc)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }

    /// Floating product `selfᵀ * x`, i.e. the vector of `⟨column_j, x⟩`.
    pub fn transpose_apply_f64(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| {
                (0..self.n)
                    .map(|i| self.get(i, j).to_f64().unwrap_or(f64::NAN) * x[i])
                    .sum()
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.n {
            self.data.swap(i * self.n + a, i * self.n + b);
        }
    }

    // column `dst` -= c * column `src`
    fn sub_column_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.n {
            let delta = self.get(i, src) * c;
            self.data[i * self.n + dst] -= delta;
        }
    }

    fn negate_column(&mut self, j: usize) {
        for i in 0..self.n {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// The `p` directions of a one-sided diagonal in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalSpec {
    directions: Vec<ExponentVector>,
    ambient_dim: usize,
}

impl DiagonalSpec {
    /// Checks shapes and extendability to a unimodular matrix.
    pub fn new(directions: Vec<ExponentVector>) -> Result<Self, LatticeError> {
        let ambient_dim = directions.first().map(|d| d.len()).ok_or(LatticeError::Empty)?;
        if !validate_diagonal_basis(&directions)? {
            let (_, _, factor) = column_reduce(&directions)?;
            return Err(LatticeError::NotCompletable { factor });
        }
        Ok(DiagonalSpec {
            directions,
            ambient_dim,
        })
    }

    pub fn directions(&self) -> &[ExponentVector] {
        &self.directions
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.directions.len()
    }
}

pub fn is_primitive(v: &ExponentVector) -> Result<bool, LatticeError> {
    if v.is_empty() {
        return Err(LatticeError::Empty);
    }
    let g = v.entries().iter().fold(0i64, |g, &e| g.gcd(&e));
    Ok(g == 1)
}

fn check_shape(directions: &[ExponentVector]) -> Result<(usize, usize), LatticeError> {
    let n = directions.first().map(|d| d.len()).ok_or(LatticeError::Empty)?;
    if n == 0 {
        return Err(LatticeError::Empty);
    }
    for d in directions {
        if d.len() != n {
            return Err(LatticeError::Dimension {
                expected: n,
                found: d.len(),
            });
        }
    }
    let p = directions.len();
    if p > n {
        return Err(LatticeError::Rank { rank: p, dim: n });
    }
    Ok((n, p))
}

/// Row-reduces the `n x p` matrix whose columns are `directions` with
/// unimodular row operations `V`, tracking `U = V^{-1}`. Returns `U`, the
/// upper-triangular block `H` (`p x p`, row-major) with `V * D = [H; 0]`,
/// and `|det H|`, the gcd of the maximal minors of `D`.
fn column_reduce(
    directions: &[ExponentVector],
) -> Result<(IntMatrix, Vec<Vec<BigInt>>, BigInt), LatticeError> {
    let (n, p) = check_shape(directions)?;
    // work[i][j] = i-th entry of direction j
    let mut work: Vec<Vec<BigInt>> = (0..n)
        .map(|i| directions.iter().map(|d| BigInt::from(d[i])).collect())
        .collect();
    let mut u = IntMatrix::identity(n);

    for j in 0..p {
        loop {
            // smallest nonzero |entry| in column j among rows j..n, first wins
            let pivot = (j..n)
                .filter(|&i| !work[i][j].is_zero())
                .min_by(|&a, &b| work[a][j].abs().cmp(&work[b][j].abs()));
            let Some(pivot) = pivot else { break };
            if pivot != j {
                work.swap(pivot, j);
                u.swap_columns(pivot, j);
            }
            let mut done = true;
            for i in (j + 1)..n {
                if work[i][j].is_zero() {
                    continue;
                }
                let c = work[i][j].div_floor(&work[j][j]);
                for k in j..p {
                    let delta = &work[j][k] * &c;
                    work[i][k] -= delta;
                }
                // row_i -= c row_j  ==>  U: column_j += c column_i
                u.sub_column_multiple(j, i, &-&c);
                if !work[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
    }

    let h: Vec<Vec<BigInt>> = work.into_iter().take(p).collect();
    let det_h = (0..p).fold(BigInt::one(), |acc, j| acc * &h[j][j]).abs();
    Ok((u, h, det_h))
}

/// True iff the directions extend to a matrix of determinant ±1, i.e. the gcd
/// of all maximal minors of the direction matrix is 1.
pub fn validate_diagonal_basis(directions: &[ExponentVector]) -> Result<bool, LatticeError> {
    let (_, _, factor) = column_reduce(directions)?;
    Ok(factor.is_one())
}

/// Completes the directions to a matrix `A` with `det A = +1` whose first
/// `p` columns are the directions, in order. Deterministic.
pub fn complete_to_unimodular(spec: &DiagonalSpec) -> Result<IntMatrix, LatticeError> {
    let directions = spec.directions();
    let (n, p) = check_shape(directions)?;
    let (u, _, factor) = column_reduce(directions)?;
    if !factor.is_one() {
        return Err(LatticeError::NotCompletable { factor });
    }
    let mut a = u;
    for (j, d) in directions.iter().enumerate() {
        for i in 0..n {
            a.set(i, j, BigInt::from(d[i]));
        }
    }
    let d = det(&a);
    if d.is_negative() {
        if p == n {
            return Err(LatticeError::NegativeDeterminant);
        }
        a.negate_column(n - 1);
    }
    debug_assert!(det(&a).is_one());
    Ok(a)
}

/// Checks that `a` has determinant +1 and begins with the spec directions.
pub fn check_completion(spec: &DiagonalSpec, a: &IntMatrix) -> Result<(), LatticeError> {
    if a.dim() != spec.ambient_dim() {
        return Err(LatticeError::Dimension {
            expected: spec.ambient_dim(),
            found: a.dim(),
        });
    }
    let d = det(a);
    if !d.is_one() {
        return Err(LatticeError::BadOverride(format!("determinant is {d}, not 1")));
    }
    for (j, q) in spec.directions().iter().enumerate() {
        if a.column(j)? != *q {
            return Err(LatticeError::BadOverride(format!(
                "column {} is not the direction {q}",
                j + 1
            )));
        }
    }
    Ok(())
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.dim();
    let mut a: Vec<Vec<BigInt>> = m.rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn minor(m: &IntMatrix, skip_row: usize, skip_col: usize) -> IntMatrix {
    let n = m.dim();
    let mut out = IntMatrix::zeros(n - 1);
    for (ri, i) in (0..n).filter(|&i| i != skip_row).enumerate() {
        for (cj, j) in (0..n).filter(|&j| j != skip_col).enumerate() {
            out.set(ri, cj, m.get(i, j).clone());
        }
    }
    out
}

/// Exact inverse of a matrix with determinant ±1 through the adjugate.
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let n = m.dim();
    let d = det(m);
    if !d.abs().is_one() {
        return Err(LatticeError::NotUnimodular { det: d });
    }
    if n == 1 {
        return Ok(IntMatrix {
            n: 1,
            data: vec![d],
        });
    }
    let mut inv = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let cof = det(&minor(m, i, j));
            let signed = if (i + j) % 2 == 0 { cof } else { -cof };
            // adj = cofactorᵀ
            inv.set(j, i, signed * &d);
        }
    }
    Ok(inv)
}
