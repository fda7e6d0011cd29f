//! The monomial-expression mini-language used on the command line.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expression := ['-'] term (('+' | '-') term)*
//! term       := factor ('*' factor)*
//! factor     := integer                      scalar coefficient
//!             | 'q' ['^' qexp]               power of q
//!             | gen index ['^' gexp]         generator of one tetrahedron
//! gen        := 'Z' | 'Zp' | 'Zpp'           Z, Z', Z''
//! qexp       := int | '(' int '/2' ')'       q^2, q^-1, q^(3/2), q^(-1/2)
//! gexp       := int | '(' int ')'            Z1^-1, Zpp2^(3)
//! ```
//!
//! Tetrahedron indices are 1-based.  The generators within one term are
//! collected into a single exponent vector and the term denotes the
//! Weyl-ordered monomial on that vector, so `Z1*Zpp1` and `Zpp1*Z1` are
//! the same element; q-commutation factors never arise at parse time.

use std::fmt;

use crate::qtorus::{weyl_with, ExponentVector, TorusElement};
use crate::QSeries;

/// Parse failure with byte position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExprError: {} (at byte {})", self.message, self.pos)
    }
}

impl std::error::Error for ExprError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n_tets: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { pos: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .replace('+', "")
            .parse()
            .map_err(|e| ExprError { pos: start, message: format!("bad integer: {e}") })
    }

    /// q exponent in half-units: `2`, `-1`, `(3/2)`, `(-1/2)` -> 4, -2, 3, -1
    fn q_exponent(&mut self) -> Result<i64, ExprError> {
        if self.eat(b'(') {
            let n = self.integer()?;
            let half = if self.eat(b'/') {
                let d = self.integer()?;
                if d != 2 {
                    return self.err("only /2 denominators are supported");
                }
                true
            } else {
                false
            };
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            Ok(if half { n } else { 2 * n })
        } else {
            Ok(2 * self.integer()?)
        }
    }

    fn generator_exponent(&mut self) -> Result<i64, ExprError> {
        if self.eat(b'(') {
            let n = self.integer()?;
            if !self.eat(b')') {
                return self.err("expected ')'");
            }
            Ok(n)
        } else {
            self.integer()
        }
    }

    /// One multiplicative factor applied to the running (coefficient, exponents).
    fn factor(&mut self, coeff_exp: &mut i64, scalar: &mut i64, exps: &mut [i64]) -> Result<(), ExprError> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                let e = if self.eat(b'^') { self.q_exponent()? } else { 2 };
                *coeff_exp += e;
                Ok(())
            }
            Some(b'Z') => {
                self.pos += 1;
                let slot = if self.eat(b'p') {
                    if self.eat(b'p') {
                        2
                    } else {
                        1
                    }
                } else {
                    0
                };
                let idx = self.integer()?;
                if idx < 1 || idx as usize > self.n_tets {
                    return self.err(format!(
                        "tetrahedron index {idx} out of range 1..={}",
                        self.n_tets
                    ));
                }
                let power = if self.eat(b'^') { self.generator_exponent()? } else { 1 };
                exps[3 * (idx as usize - 1) + slot] += power;
                Ok(())
            }
            Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' => {
                let n = self.integer()?;
                *scalar *= n;
                Ok(())
            }
            _ => self.err("expected a factor (integer, q power, or generator)"),
        }
    }

    fn term(&mut self, sign: i64) -> Result<TorusElement, ExprError> {
        let mut coeff_exp = 0i64;
        let mut scalar = sign;
        let mut exps = vec![0i64; 3 * self.n_tets];
        self.factor(&mut coeff_exp, &mut scalar, &mut exps)?;
        while self.eat(b'*') {
            self.factor(&mut coeff_exp, &mut scalar, &mut exps)?;
        }
        let coeff = QSeries::exact_monomial(scalar.into(), coeff_exp);
        Ok(weyl_with(coeff, ExponentVector::new(exps)))
    }

    fn expression(&mut self) -> Result<TorusElement, ExprError> {
        let mut sign = 1i64;
        if self.eat(b'-') {
            sign = -1;
        } else {
            let _ = self.eat(b'+');
        }
        let mut total = self.term(sign)?;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                None => break,
                Some(_) => return self.err("expected '+', '-', or end of expression"),
            };
            let t = self.term(sign)?;
            total = total.add(&t).expect("parser emits uniform lengths");
        }
        Ok(total)
    }
}

/// Parse an element over `n_tets` tetrahedra.
pub fn parse_element(src: &str, n_tets: usize) -> Result<TorusElement, ExprError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, n_tets };
    let e = p.expression()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse a single Weyl monomial and return its exponent vector, rejecting
/// multi-term expressions and non-unit coefficients other than a sign.
pub fn parse_monomial(src: &str, n_tets: usize) -> Result<ExponentVector, ExprError> {
    let e = parse_element(src, n_tets)?;
    if e.num_terms() != 1 {
        return Err(ExprError {
            pos: 0,
            message: format!("expected a single monomial, found {} terms", e.num_terms()),
        });
    }
    let (k, _) = e.terms().next().unwrap();
    Ok(k.clone())
}
