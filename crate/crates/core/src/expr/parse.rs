//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar: sums and differences of products/quotients of powers; atoms are
//! integers, finite decimals, identifiers `[a-zA-Z][a-zA-Z0-9_]*` and
//! parenthesized expressions. Exponents are (possibly negative) integers.
//! Division is only allowed by single-term polynomials.

use std::fmt;

use super::poly::Poly;
use super::rational::Rational;
use super::var::Var;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    parse_poly_at(src, 1, 1)
}

/// Parses `src`, reporting positions relative to (`line`, `col`).
pub fn parse_poly_at(src: &str, line: usize, col: usize) -> Result<Poly, ParseError> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0, line, col };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(&format!("unexpected `{c}`")));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Parser {
    fn error(&self, msg: &str) -> ParseError {
        ParseError { line: self.line, col: self.col + self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let start = self.pos;
                let d = self.unary()?;
                let inv = d.monomial_inverse().map_err(|e| ParseError {
                    line: self.line,
                    col: self.col + start,
                    msg: e.to_string(),
                })?;
                acc = acc * inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let neg = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let e: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
        if e > 64 {
            return Err(self.error("exponent too large"));
        }
        if neg {
            base.monomial_inverse().map(|inv| inv.pow(e)).map_err(|err| self.error(&err.to_string()))
        } else {
            Ok(base.pow(e))
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                let r: Rational =
                    text.parse().map_err(|e: String| ParseError { line: self.line, col: self.col + start, msg: e })?;
                Ok(Poly::constant(r))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                Ok(Poly::var(Var::named(&name)))
            }
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_monomials_with_fractions() {
        let p = parse_poly("3/5 * x^2*y - (x + 1)^2").unwrap();
        assert_eq!(p.to_string(), "3/5*x^2*y - x^2 - 2*x - 1");
    }

    #[test]
    fn negative_exponents_and_division() {
        assert_eq!(parse_poly("z^-2*a").unwrap().to_string(), "z^-2*a");
        assert_eq!(parse_poly("a/(2*d)").unwrap().to_string(), "1/2*a*d^-1");
        assert!(parse_poly("a/(d + 1)").is_err());
    }

    #[test]
    fn reports_column() {
        let err = parse_poly_at("x + * y", 4, 5).unwrap_err();
        assert_eq!((err.line, err.col), (4, 9));
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x^").is_err());
    }
}
