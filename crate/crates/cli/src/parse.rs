//! Expression parser for rational functions.
//!
//! Grammar (whitespace and newlines are insignificant):
//!
//! ```text
//! expr    := sum ( '/' sum )?          a single top-level '/' splits P / Q
//! sum     := [+-] term ( [+-] term )*
//! term    := power ( '*' power | '/' power )*   '/' only inside parentheses,
//!                                               and only by a nonzero constant
//! power   := atom ( '^' exponent )?
//! exponent:= [+-]? INTEGER | '(' [+-]? INTEGER ')'
//! atom    := NUMBER | NAME | '(' sum ')'
//! ```
//!
//! Numbers are integers or decimals (`0.25` is read exactly as `1/4`).
//! Negative exponents are accepted only on monomials. Implicit
//! multiplication is not supported.

use std::fmt;

use diagint_core::laurent::{AlgebraError, Rational, Variables};
use diagint_core::{LaurentPolynomial, RationalFunction};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Largest exponent accepted on a base with more than one term.
pub const MAX_SUM_EXPONENT: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownVariable,
    NonIntegerExponent,
    NegativePowerOfSum,
    DivisionByNonConstant,
    ZeroDenominator,
    Overflow,
}

impl ParseErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "parse.syntax",
            ParseErrorKind::UnknownVariable => "parse.unknown_variable",
            ParseErrorKind::NonIntegerExponent => "parse.non_integer_exponent",
            ParseErrorKind::NegativePowerOfSum => "parse.negative_power_of_sum",
            ParseErrorKind::DivisionByNonConstant => "parse.division_by_non_constant",
            ParseErrorKind::ZeroDenominator => "parse.zero_denominator",
            ParseErrorKind::Overflow => "parse.overflow",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    /// Digits with a decimal point: mantissa and number of fractional digits.
    Decimal(BigInt, u32),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "number {n}"),
            Tok::Decimal(..) => write!(f, "decimal number"),
            Tok::Name(s) => write!(f, "name '{s}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut digits = String::new();
            let mut frac: Option<u32> = None;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                if chars[i] == '.' {
                    if frac.is_some() {
                        return Err(err(ParseErrorKind::Syntax, line, column + (i - start), "second decimal point in number"));
                    }
                    frac = Some(0);
                } else {
                    digits.push(chars[i]);
                    if let Some(f) = frac.as_mut() {
                        *f += 1;
                    }
                }
                i += 1;
            }
            let mantissa: BigInt = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse().expect("ascii digits")
            };
            match frac {
                None => Tok::Int(mantissa),
                Some(f) => Tok::Decimal(mantissa, f),
            }
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Name(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' | '\u{2212}' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(err(ParseErrorKind::Syntax, l0, c0, format!("unexpected character '{other}'")));
                }
            }
        };
        column += i - start;
        out.push(Token {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a Variables,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(())
        } else {
            Err(err(ParseErrorKind::Syntax, t.line, t.column, format!("expected {want}, found {}", t.tok)))
        }
    }

    fn algebra(&self, at: &Token, e: AlgebraError) -> ParseError {
        match e {
            AlgebraError::Overflow => err(ParseErrorKind::Overflow, at.line, at.column, "exponent overflow"),
            other => err(ParseErrorKind::Syntax, at.line, at.column, other.to_string()),
        }
    }

    fn sum(&mut self, depth: usize) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = LaurentPolynomial::zero(self.vars.clone());
        let mut negate = false;
        match self.peek().tok {
            Tok::Plus => {
                self.next();
            }
            Tok::Minus => {
                self.next();
                negate = true;
            }
            _ => {}
        }
        loop {
            let at = self.peek().clone();
            let term = self.term(depth)?;
            let term = if negate { term.neg() } else { term };
            acc = acc.add(&term).map_err(|e| self.algebra(&at, e))?;
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    negate = false;
                }
                Tok::Minus => {
                    self.next();
                    negate = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.power(depth)?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    let at = self.peek().clone();
                    let rhs = self.power(depth)?;
                    acc = acc.mul(&rhs).map_err(|e| self.algebra(&at, e))?;
                }
                Tok::Slash if depth > 0 => {
                    let slash = self.next();
                    let rhs = self.power(depth)?;
                    let c = rhs.as_constant().ok_or_else(|| {
                        err(
                            ParseErrorKind::DivisionByNonConstant,
                            slash.line,
                            slash.column,
                            "inside parentheses '/' may only divide by a constant; use a single top-level '/' for P/Q",
                        )
                    })?;
                    if c.is_zero() {
                        return Err(err(ParseErrorKind::ZeroDenominator, slash.line, slash.column, "division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                Tok::Int(_) | Tok::Decimal(..) | Tok::Name(_) | Tok::LParen => {
                    let t = self.peek();
                    return Err(err(
                        ParseErrorKind::Syntax,
                        t.line,
                        t.column,
                        format!("expected an operator before {}; implicit multiplication is not supported", t.tok),
                    ));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self, depth: usize) -> Result<LaurentPolynomial, ParseError> {
        let base = self.atom(depth)?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.next();
        let k = self.exponent()?;
        if base.is_zero() && k < 0 {
            return Err(err(ParseErrorKind::ZeroDenominator, caret.line, caret.column, "zero to a negative power"));
        }
        if k < 0 && base.as_monomial().is_none() {
            return Err(err(
                ParseErrorKind::NegativePowerOfSum,
                caret.line,
                caret.column,
                "negative exponents are only allowed on monomials",
            ));
        }
        if base.len() > 1 && k > MAX_SUM_EXPONENT {
            return Err(err(
                ParseErrorKind::Overflow,
                caret.line,
                caret.column,
                format!("exponent {k} on a sum exceeds {MAX_SUM_EXPONENT}"),
            ));
        }
        base.pow(k)
            .ok_or_else(|| err(ParseErrorKind::Overflow, caret.line, caret.column, "exponent overflow"))
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.peek().tok == Tok::LParen;
        if paren {
            self.next();
        }
        let mut sign = 1;
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                sign = -1;
            }
            Tok::Plus => {
                self.next();
            }
            _ => {}
        }
        let t = self.next();
        let k = match t.tok {
            Tok::Int(n) => i64::try_from(n * sign)
                .map_err(|_| err(ParseErrorKind::Overflow, t.line, t.column, "exponent does not fit in 64 bits"))?,
            Tok::Decimal(..) | Tok::Name(_) | Tok::LParen => {
                return Err(err(
                    ParseErrorKind::NonIntegerExponent,
                    t.line,
                    t.column,
                    "exponents must be integer literals",
                ));
            }
            other => {
                return Err(err(
                    ParseErrorKind::Syntax,
                    t.line,
                    t.column,
                    format!("expected an integer exponent, found {other}"),
                ));
            }
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        Ok(k)
    }

    fn atom(&mut self, depth: usize) -> Result<LaurentPolynomial, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok(LaurentPolynomial::constant(self.vars.clone(), Rational::from_integer(n))),
            Tok::Decimal(m, f) => Ok(LaurentPolynomial::constant(
                self.vars.clone(),
                Rational::new(m, BigInt::from(10).pow(f)),
            )),
            Tok::Name(name) => LaurentPolynomial::variable(self.vars.clone(), &name).map_err(|_| {
                let hint = if self.vars.iter().any(|v| name.starts_with(v.as_str()) && name.len() > v.len()) {
                    " (implicit multiplication is not supported; write a*b)"
                } else {
                    ""
                };
                err(
                    ParseErrorKind::UnknownVariable,
                    t.line,
                    t.column,
                    format!("unknown variable '{name}'{hint}; declared: {}", self.vars.join(", ")),
                )
            }),
            Tok::LParen => {
                let inner = self.sum(depth + 1)?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(err(
                ParseErrorKind::Syntax,
                t.line,
                t.column,
                format!("expected a number, variable or '(', found {other}"),
            )),
        }
    }
}

/// Parses `text` into an exact rational function over `vars`.
pub fn parse_expression(text: &str, vars: &Variables) -> Result<RationalFunction, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
    };
    let numerator = p.sum(0)?;
    let denominator = if p.peek().tok == Tok::Slash {
        let slash = p.next();
        let d = p.sum(0)?;
        if d.is_zero() {
            return Err(err(ParseErrorKind::ZeroDenominator, slash.line, slash.column, "denominator is zero"));
        }
        d
    } else {
        LaurentPolynomial::one(vars.clone())
    };
    let t = p.peek();
    match t.tok {
        Tok::End => {}
        Tok::Slash => {
            return Err(err(
                ParseErrorKind::Syntax,
                t.line,
                t.column,
                "only a single top-level '/' is allowed; parenthesize constant divisions",
            ));
        }
        _ => {
            return Err(err(ParseErrorKind::Syntax, t.line, t.column, format!("unexpected {}", t.tok)));
        }
    }
    // a constant denominator is folded into the numerator
    if let Some(c) = denominator.as_constant() {
        if !c.is_one() {
            return Ok(RationalFunction::from_polynomial(numerator.scale(&c.recip())));
        }
    }
    RationalFunction::new(numerator, denominator)
        .map_err(|e| err(ParseErrorKind::Syntax, 1, 1, e.to_string()))
}

/// Parses a Laurent polynomial; a top-level '/' is accepted only with a
/// constant divisor.
pub fn parse_polynomial(text: &str, vars: &Variables) -> Result<LaurentPolynomial, ParseError> {
    let f = parse_expression(text, vars)?;
    match f.denominator().as_constant() {
        Some(c) => Ok(f.numerator().scale(&c.recip())),
        None => Err(err(
            ParseErrorKind::DivisionByNonConstant,
            1,
            1,
            "expected a Laurent polynomial, found a quotient",
        )),
    }
}
