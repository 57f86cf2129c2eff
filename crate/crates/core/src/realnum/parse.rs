//! A small infix parser for command-line expression arguments.
//!
//! Grammar: `+ - * /`, `^` with an integer exponent, parentheses, decimal
//! and rational literals (`4.5`, `21/10`), the functions `sqrt`, `log`,
//! `exp`, and the named constants `alpha` = 1 + sqrt(2) and
//! `tau` = log 10 / log alpha.

use super::Expr;
use rug::{Integer, Rational};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            message: message.into(),
            position: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.factor()?;
            } else if self.eat(b'/') {
                acc = acc / self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let digits = self.digits()?;
            let k: i64 = digits
                .parse()
                .map_err(|_| self.err("exponent out of range"))?;
            return Ok(base.pow_int(if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                match name.as_str() {
                    "alpha" => Ok(Expr::int(1) + Expr::int(2).sqrt()),
                    "tau" => {
                        let alpha = Expr::int(1) + Expr::int(2).sqrt();
                        Ok(Expr::int(10).log() / alpha.log())
                    }
                    "sqrt" | "log" | "exp" => {
                        if !self.eat(b'(') {
                            return Err(self.err("expected '(' after function name"));
                        }
                        let arg = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.err("expected ')'"));
                        }
                        Ok(match name.as_str() {
                            "sqrt" => arg.sqrt(),
                            "log" => arg.log(),
                            _ => arg.exp(),
                        })
                    }
                    _ => Err(self.err(&format!("unknown name '{name}'"))),
                }
            }
            _ => Err(self.err("expected a number, name, or '('")),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    /// Integer or decimal literal; `12.34e5`-style exponents are also
    /// accepted so constants like `3.2e30` paste directly from prose.
    fn number(&mut self) -> Result<Expr, ParseError> {
        let int_part = self.digits()?;
        let mut numer: Integer = int_part
            .parse()
            .map_err(|_| self.err("integer literal out of range"))?;
        let mut denom_pow: u32 = 0;
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            let frac = self.digits()?;
            denom_pow = frac.len() as u32;
            let frac_int: Integer = frac
                .parse()
                .map_err(|_| self.err("fraction digits out of range"))?;
            numer = numer * Integer::from(Integer::u_pow_u(10, denom_pow)) + frac_int;
        }
        let mut exp10: i64 = 0;
        if self.pos < self.bytes.len() && (self.bytes[self.pos] | 0x20) == b'e' {
            let save = self.pos;
            self.pos += 1;
            let neg = self.eat(b'-');
            match self.digits() {
                Ok(d) => {
                    let e: i64 = d.parse().map_err(|_| self.err("exponent out of range"))?;
                    exp10 = if neg { -e } else { e };
                }
                Err(_) => self.pos = save,
            }
        }
        let mut value = Rational::from(numer);
        value /= Integer::from(Integer::u_pow_u(10, denom_pow));
        let shift = Integer::from(Integer::u_pow_u(10, exp10.unsigned_abs() as u32));
        if exp10 >= 0 {
            value *= &shift;
        } else {
            value /= &shift;
        }
        if value.is_integer() {
            Ok(Expr::int(value.numer().clone()))
        } else {
            Ok(Expr::rational(value))
        }
    }
}
