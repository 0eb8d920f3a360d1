//! Polynomial string grammar.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor (('*' | '/')? factor)*       -- '/' only by a constant
//! factor := atom ('^' uint)?
//! atom   := number | ident | '(' expr ')'
//! number := digits ('.' digits)?
//! ident  := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! Juxtaposition multiplies (`2x`, `3(x+y)`), so `x y` is `x*y`. Every
//! identifier must be one of the declared variables.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Rational, RationalPoly};
use crate::error::{Error, Result};

pub fn parse_poly<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<RationalPoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        vars: vars.iter().map(|s| s.as_ref()).collect(),
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty polynomial"));
    }
    let poly = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vec<&'a str>,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            input: String::from_utf8_lossy(self.src).into_owned(),
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalPoly> {
        self.skip_ws();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let divisor = self.factor()?;
                    let c = as_constant(&divisor).ok_or_else(|| self.error("division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' || c == b'.' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalPoly> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let k: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .expect("ascii")
                .parse()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let n = self.number()?;
                Ok(RationalPoly::constant(self.nvars(), n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(RationalPoly::variable(self.nvars(), i)),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable '{name}'")))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Rational> {
        let start = self.pos;
        let mut int_digits = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            int_digits.push(c as char);
            self.pos += 1;
        }
        let mut frac_digits = String::new();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
                frac_digits.push(c as char);
                self.pos += 1;
            }
        }
        if int_digits.is_empty() && frac_digits.is_empty() {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        let digits = format!("{int_digits}{frac_digits}");
        let numer: BigInt = digits.parse().map_err(|_| self.error("malformed number"))?;
        let denom = num_traits::pow(BigInt::from(10), frac_digits.len());
        Ok(Rational::new(numer, denom))
    }
}

fn as_constant(p: &RationalPoly) -> Option<Rational> {
    match p.len() {
        0 => Some(Rational::zero()),
        1 => {
            let (e, c) = p.terms().next()?;
            e.is_constant().then(|| c.clone())
        }
        _ => None,
    }
}
