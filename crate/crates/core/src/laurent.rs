//! Sparse multivariate Laurent polynomials and rational functions with exact
//! rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{ExponentVector, IntMatrix, LatticeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("variable sets differ: {left:?} vs {right:?}")]
    VariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("variable {0} is zero but occurs with a negative exponent")]
    ZeroToNegativePower(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("exponent overflow")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Rational = BigRational;

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Ordered variable names shared by all terms of a polynomial.
pub type Variables = Arc<[String]>;

pub fn variables<S: AsRef<str>>(names: &[S]) -> Variables {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Finite sum of monomials `c * x^e` with `e ∈ Z^n` and exact `c`. Zero
/// coefficients are never stored; terms iterate in lexicographic exponent
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    vars: Variables,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl LaurentPolynomial {
    pub fn zero(vars: Variables) -> Self {
        LaurentPolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Variables, c: Rational) -> Self {
        let n = vars.len();
        Self::monomial(vars, ExponentVector::zeros(n), c)
    }

    pub fn one(vars: Variables) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn monomial(vars: Variables, exponent: ExponentVector, c: Rational) -> Self {
        assert_eq!(exponent.len(), vars.len(), "exponent length must match variables");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentPolynomial { vars, terms }
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeated
    /// exponents.
    pub fn from_terms<I>(vars: Variables, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(AlgebraError::Dimension {
                    expected: p.vars.len(),
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn variable(vars: Variables, name: &str) -> Result<Self, AlgebraError> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let n = vars.len();
        Ok(Self::monomial(vars, ExponentVector::unit(n, i), Rational::one()))
    }

    fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&ExponentVector::zeros(self.nvars()))
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some((e, c))` when there is exactly one term.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn has_nonnegative_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.is_nonnegative())
    }

    fn same_vars(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.vars.clone());
        }
        LaurentPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_vars(other)?;
        let mut out = Self::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.checked_add(eb).ok_or(AlgebraError::Overflow)?;
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Integer power; negative powers are only defined for monomials.
    pub fn pow(&self, k: i64) -> Option<Self> {
        if k < 0 {
            let (e, c) = self.as_monomial()?;
            let inv = ExponentVector::new(
                e.entries()
                    .iter()
                    .map(|x| x.checked_mul(k))
                    .collect::<Option<Vec<_>>>()?,
            );
            let coeff = c.recip().pow(i32::try_from(-k).ok()?);
            return Some(Self::monomial(self.vars.clone(), inv, coeff));
        }
        let mut base = self.clone();
        let mut acc = Self::one(self.vars.clone());
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).ok()?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).ok()?;
            }
        }
        Some(acc)
    }

    /// Same terms under new variable names.
    pub fn rename(&self, new_vars: Variables) -> Result<Self, AlgebraError> {
        if new_vars.len() != self.nvars() {
            return Err(AlgebraError::Dimension {
                expected: self.nvars(),
                found: new_vars.len(),
            });
        }
        Ok(LaurentPolynomial {
            vars: new_vars,
            terms: self.terms.clone(),
        })
    }

    /// `Σ c_e Π x_k^{e_k}` at a complex point.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64, AlgebraError> {
        if point.len() != self.nvars() {
            return Err(AlgebraError::Dimension {
                expected: self.nvars(),
                found: point.len(),
            });
        }
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut m = Complex64::new(rational_to_f64(c), 0.0);
            for (k, &ek) in e.entries().iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                if ek < 0 && point[k].is_zero() {
                    return Err(AlgebraError::ZeroToNegativePower(self.vars[k].clone()));
                }
                m *= point[k].powi(ek as i32);
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        if point.len() != self.nvars() {
            return Err(AlgebraError::Dimension {
                expected: self.nvars(),
                found: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (k, &ek) in e.entries().iter().enumerate() {
                m *= rational_pow(&point[k], ek)
                    .ok_or_else(|| AlgebraError::ZeroToNegativePower(self.vars[k].clone()))?;
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Monomial change of variables `x = y^B`: every `x^a` becomes `y^{B a}`.
    /// Colliding images are summed.
    pub fn monomial_substitute(
        &self,
        b: &IntMatrix,
        new_vars: Variables,
    ) -> Result<Self, AlgebraError> {
        if b.dim() != self.nvars() {
            return Err(AlgebraError::Dimension {
                expected: self.nvars(),
                found: b.dim(),
            });
        }
        if new_vars.len() != b.dim() {
            return Err(AlgebraError::Dimension {
                expected: b.dim(),
                found: new_vars.len(),
            });
        }
        let mut out = Self::zero(new_vars);
        for (e, c) in &self.terms {
            out.add_term(b.apply(e)?, c.clone());
        }
        Ok(out)
    }

    /// Binds some variables to exact values; the result lives in the
    /// remaining variables, in their original order.
    pub fn specialize(&self, bindings: &BTreeMap<String, Rational>) -> Result<Self, AlgebraError> {
        let bound = self.binding_slots(bindings)?;
        let keep: Vec<usize> = (0..self.nvars()).filter(|&k| bound[k].is_none()).collect();
        let new_vars: Variables = keep.iter().map(|&k| self.vars[k].clone()).collect();
        let mut out = Self::zero(new_vars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            for (k, value) in bound.iter().enumerate() {
                if let Some(v) = value {
                    coeff *= rational_pow(v, e[k])
                        .ok_or_else(|| AlgebraError::ZeroToNegativePower(self.vars[k].clone()))?;
                }
            }
            let rest = ExponentVector::new(keep.iter().map(|&k| e[k]).collect());
            out.add_term(rest, coeff);
        }
        Ok(out)
    }

    fn binding_slots<'a, V>(
        &self,
        bindings: &'a BTreeMap<String, V>,
    ) -> Result<Vec<Option<&'a V>>, AlgebraError> {
        let mut slots = vec![None; self.nvars()];
        for (name, v) in bindings {
            let k = self
                .vars
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| AlgebraError::UnknownVariable(name.clone()))?;
            slots[k] = Some(v);
        }
        Ok(slots)
    }

    /// Binds the variables listed in `bound` (by index) to complex values,
    /// producing a floating polynomial in the remaining variables.
    pub fn bind_numeric(&self, bound: &[(usize, Complex64)]) -> Result<NumericLaurent, AlgebraError> {
        let mut slots: Vec<Option<Complex64>> = vec![None; self.nvars()];
        for &(k, v) in bound {
            if k >= self.nvars() {
                return Err(AlgebraError::Dimension {
                    expected: self.nvars(),
                    found: k + 1,
                });
            }
            slots[k] = Some(v);
        }
        let keep: Vec<usize> = (0..self.nvars()).filter(|&k| slots[k].is_none()).collect();
        let mut merged: BTreeMap<Vec<i32>, Complex64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut coeff = Complex64::new(rational_to_f64(c), 0.0);
            for (k, slot) in slots.iter().enumerate() {
                if let Some(v) = slot {
                    if e[k] < 0 && v.is_zero() {
                        return Err(AlgebraError::ZeroToNegativePower(self.vars[k].clone()));
                    }
                    coeff *= v.powi(i32::try_from(e[k]).map_err(|_| AlgebraError::Overflow)?);
                }
            }
            let rest = keep
                .iter()
                .map(|&k| i32::try_from(e[k]).map_err(|_| AlgebraError::Overflow))
                .collect::<Result<Vec<_>, _>>()?;
            *merged.entry(rest).or_insert_with(Complex64::zero) += coeff;
        }
        Ok(NumericLaurent {
            nvars: keep.len(),
            terms: merged.into_iter().collect(),
        })
    }

    pub fn to_numeric(&self) -> Result<NumericLaurent, AlgebraError> {
        self.bind_numeric(&[])
    }
}

fn rational_pow(v: &Rational, e: i64) -> Option<Rational> {
    if e == 0 {
        return Some(Rational::one());
    }
    if v.is_zero() {
        return (e > 0).then(Rational::zero);
    }
    let k = i32::try_from(e).ok()?;
    Some(v.pow(k))
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "({}/{})", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Parser-compatible text, e.g. `1 + z1^2*z2^-1 - (1/2)*z3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for (k, &ek) in e.entries().iter().enumerate() {
                match ek {
                    0 => {}
                    1 => factors.push(self.vars[k].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[k], ek)),
                }
            }
            if factors.is_empty() || !mag.is_one() {
                write_rational(f, &mag)?;
                if !factors.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Polynomial with `f64` complex coefficients and small exponents, for fast
/// repeated evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericLaurent {
    nvars: usize,
    terms: Vec<(Vec<i32>, Complex64)>,
}

impl NumericLaurent {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<i32>, Complex64)] {
        &self.terms
    }

    /// Evaluates without checks; zero coordinates under negative exponents
    /// give non-finite output.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut m = *c;
            for (x, &k) in point.iter().zip(e) {
                if k != 0 {
                    m *= x.powi(k);
                }
            }
            acc += m;
        }
        acc
    }

    pub fn constant_term(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&k| k == 0))
            .map(|(_, c)| *c)
            .unwrap_or_else(Complex64::zero)
    }
}

/// `P / Q` over a shared variable list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: LaurentPolynomial,
    denominator: LaurentPolynomial,
}

impl RationalFunction {
    pub fn new(
        numerator: LaurentPolynomial,
        denominator: LaurentPolynomial,
    ) -> Result<Self, AlgebraError> {
        numerator.same_vars(&denominator)?;
        if denominator.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(RationalFunction {
            numerator,
            denominator,
        })
    }

    pub fn from_polynomial(p: LaurentPolynomial) -> Self {
        let one = LaurentPolynomial::one(p.vars.clone());
        RationalFunction {
            numerator: p,
            denominator: one,
        }
    }

    pub fn numerator(&self) -> &LaurentPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &LaurentPolynomial {
        &self.denominator
    }

    pub fn vars(&self) -> &Variables {
        self.numerator.vars()
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64, AlgebraError> {
        Ok(self.numerator.eval(point)? / self.denominator.eval(point)?)
    }

    pub fn substitute(&self, b: &IntMatrix, new_vars: Variables) -> Result<Self, AlgebraError> {
        Ok(RationalFunction {
            numerator: self.numerator.monomial_substitute(b, new_vars.clone())?,
            denominator: self.denominator.monomial_substitute(b, new_vars)?,
        })
    }

    pub fn rename(&self, new_vars: Variables) -> Result<Self, AlgebraError> {
        Ok(RationalFunction {
            numerator: self.numerator.rename(new_vars.clone())?,
            denominator: self.denominator.rename(new_vars)?,
        })
    }

    /// Binds variables to exact values. Fails if the denominator becomes
    /// identically zero.
    pub fn specialize(&self, bindings: &BTreeMap<String, Rational>) -> Result<Self, AlgebraError> {
        RationalFunction::new(
            self.numerator.specialize(bindings)?,
            self.denominator.specialize(bindings)?,
        )
    }

    pub fn bind_numeric(&self, bound: &[(usize, Complex64)]) -> Result<NumericRational, AlgebraError> {
        Ok(NumericRational {
            numerator: self.numerator.bind_numeric(bound)?,
            denominator: self.denominator.bind_numeric(bound)?,
        })
    }

    pub fn to_numeric(&self) -> Result<NumericRational, AlgebraError> {
        self.bind_numeric(&[])
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.as_constant() == Some(Rational::one()) {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "({})/({})", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericRational {
    pub numerator: NumericLaurent,
    pub denominator: NumericLaurent,
}

impl NumericRational {
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.numerator.eval(point) / self.denominator.eval(point)
    }
}

/// Exact rational from an integer pair; panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
