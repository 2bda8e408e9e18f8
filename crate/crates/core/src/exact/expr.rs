//! Expression grammar shared by the CLI and the space files.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//!
//! `/` divides by a nonzero constant, so `a/b` spells a rational. Identifiers
//! are resolved by the target [`ExprAlgebra`]; for the Gaussian space they are
//! `x` and `eta`, and `eta^2` normalizes to zero.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::{GaussianElement, Linear, Polynomial, Rational};
use crate::error::Error;

/// What an expression evaluates into.
pub trait ExprAlgebra {
    type Elem: Linear;

    fn constant(&self, c: Rational) -> Option<Self::Elem>;
    fn variable(&self, name: &str) -> Option<Self::Elem>;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// The scalar an element equals, if it is a multiple of the unit.
    fn as_scalar(&self, e: &Self::Elem) -> Option<Rational>;
}

/// Expressions in `x` and `eta`.
#[derive(Clone, Copy, Debug, Default)]
pub struct GaussianExpr;

impl ExprAlgebra for GaussianExpr {
    type Elem = GaussianElement;

    fn constant(&self, c: Rational) -> Option<GaussianElement> {
        Some(GaussianElement::even(Polynomial::constant(c)))
    }

    fn variable(&self, name: &str) -> Option<GaussianElement> {
        match name {
            "x" => Some(GaussianElement::x()),
            "eta" => Some(GaussianElement::eta()),
            _ => None,
        }
    }

    fn multiply(&self, a: &GaussianElement, b: &GaussianElement) -> GaussianElement {
        a.product(b)
    }

    fn as_scalar(&self, e: &GaussianElement) -> Option<Rational> {
        if e.q.is_zero() {
            e.p.as_constant()
        } else {
            None
        }
    }
}

/// Parses a Gaussian expression such as `"(x-1)*eta + x^2 - 1/2"`.
pub fn parse_gaussian(s: &str) -> Result<GaussianElement, Error> {
    parse_expression(&GaussianExpr, s)
}

pub fn parse_expression<A: ExprAlgebra>(alg: &A, s: &str) -> Result<A::Elem, Error> {
    let mut parser = Parser { alg, src: s, pos: 0 };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos < s.len() {
        return Err(parser.error("unexpected input"));
    }
    Ok(value)
}

/// Splits a comma-separated list at top level (outside parentheses), keeping
/// byte offsets so parse errors point into the original string.
pub fn split_list(s: &str) -> Vec<(usize, &str)> {
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push((start, &s[start..]));
    items
}

/// Parses `"e1, e2, ..."` into a list of elements.
pub fn parse_list<A: ExprAlgebra>(alg: &A, s: &str) -> Result<Vec<A::Elem>, Error> {
    split_list(s)
        .into_iter()
        .map(|(offset, item)| {
            parse_expression(alg, item).map_err(|e| match e {
                Error::Parse { offset: o, message } => Error::Parse {
                    offset: o + offset,
                    message,
                },
                other => other,
            })
        })
        .collect()
}

struct Parser<'a, A> {
    alg: &'a A,
    src: &'a str,
    pos: usize,
}

impl<A: ExprAlgebra> Parser<'_, A> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn expr(&mut self) -> Result<A::Elem, Error> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.bump();
            let rhs = self.term()?;
            if op == '+' {
                acc.add_assign_ref(&rhs);
            } else {
                acc.add_assign_ref(&rhs.negated());
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<A::Elem, Error> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.bump();
            self.skip_ws();
            let at = self.pos;
            let rhs = self.unary()?;
            if op == '*' {
                acc = self.alg.multiply(&acc, &rhs);
            } else {
                let divisor = self.alg.as_scalar(&rhs).ok_or_else(|| Error::Parse {
                    offset: at,
                    message: "division by a non-constant".into(),
                })?;
                if divisor.is_zero() {
                    return Err(Error::Parse {
                        offset: at,
                        message: "division by zero".into(),
                    });
                }
                acc = acc.scaled(&divisor.recip());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<A::Elem, Error> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(self.unary()?.negated());
        }
        if self.peek() == Some('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<A::Elem, Error> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        self.skip_ws();
        let at = self.pos;
        let exponent = self.integer().and_then(|n| n.to_u32()).ok_or_else(|| Error::Parse {
            offset: at,
            message: "expected a non-negative integer exponent".into(),
        })?;
        let one = self
            .alg
            .constant(Rational::one())
            .ok_or_else(|| self.error("no unit element for exponentiation"))?;
        Ok((0..exponent).fold(one, |acc, _| self.alg.multiply(&acc, &base)))
    }

    fn integer(&mut self) -> Option<BigInt> {
        let rest = &self.src[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        self.pos += len;
        rest[..len].parse().ok()
    }

    fn atom(&mut self) -> Result<A::Elem, Error> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let n = self.integer().expect("digit present");
                self.alg
                    .constant(Rational::from_integer(n))
                    .ok_or_else(|| Error::Parse {
                        offset: at,
                        message: "constants need a unit element".into(),
                    })
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let at = self.pos;
                let rest = &self.src[self.pos..];
                let len = rest
                    .char_indices()
                    .find(|(_, c)| !(c.is_alphanumeric() || *c == '_'))
                    .map_or(rest.len(), |(i, _)| i);
                let name = &rest[..len];
                self.pos += len;
                self.alg.variable(name).ok_or_else(|| Error::Parse {
                    offset: at,
                    message: format!("unknown identifier {name:?}"),
                })
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
