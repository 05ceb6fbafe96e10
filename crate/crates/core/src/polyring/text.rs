//! Canonical text form of polynomials and a small expression parser.
//!
//! Printing lists terms in ascending lexicographic order of exponent vectors,
//! joined by ` + ` / ` - `. Coefficients are rationals (`3`, `-1/4`) or
//! integer combinations of powers of `w` (the root of unity `ω_n`) over a
//! common denominator (`(1-w)/2`). Monomials are `name` or `name^e` joined
//! by `*`. The zero polynomial prints as `0`.
//!
//! The parser accepts any arithmetic expression over integers, `w`, the
//! variables of the space, `+ - * ^`, parentheses and division by nonzero
//! constants, so canonical output parses back to the same polynomial.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::Polynomial;
use super::space::{VariableSpace, ROOT_SYMBOL};
use crate::error::{Error, Result};
use crate::exactnum::{CyclotomicContext, CyclotomicNumber};

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let space = self.space();
        for (k, (exp, c)) in self.terms().enumerate() {
            let mono: Vec<String> = exp
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        space.name(i).to_string()
                    } else {
                        format!("{}^{e}", space.name(i))
                    }
                })
                .collect();
            let coeff = c.to_string();
            let term = if mono.is_empty() {
                coeff
            } else if coeff == "1" {
                mono.join("*")
            } else if coeff == "-1" {
                format!("-{}", mono.join("*"))
            } else {
                format!("{coeff}*{}", mono.join("*"))
            };
            match (k, term.strip_prefix('-')) {
                (0, _) => f.write_str(&term)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {term}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Int(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::parse(0, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    space: &'a Arc<VariableSpace>,
    ctx: &'a CyclotomicContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(0, format!("{} (at token {})", msg.into(), self.pos + 1))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let divisor = self.unary()?;
                let c = divisor
                    .as_constant()
                    .ok_or_else(|| self.err("division by a non-constant"))?;
                acc = acc.scale(&c.inv()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(e)) => {
                self.pos += 1;
                let e: u64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
                if negative {
                    let c = base
                        .as_constant()
                        .ok_or_else(|| self.err("negative power of a non-constant"))?;
                    Ok(Polynomial::constant(self.space, c.inv()?.pow(e as i64)?))
                } else {
                    Ok(base.pow(e))
                }
            }
            _ => Err(self.err("expected integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(Polynomial::constant(
                    self.space,
                    CyclotomicNumber::from_bigint(self.ctx, v),
                ))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if name == ROOT_SYMBOL {
                    Ok(Polynomial::constant(self.space, self.ctx.root_power(1)))
                } else {
                    Polynomial::var_named(self.space, self.ctx, &name)
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Parses an expression into a polynomial of `space` over `ctx`.
pub fn parse_polynomial(text: &str, space: &Arc<VariableSpace>, ctx: &CyclotomicContext) -> Result<Polynomial> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        space,
        ctx,
    };
    if parser.tokens.is_empty() {
        return Err(Error::parse(0, "empty polynomial"));
    }
    let out = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(out)
}

/// Parses a constant expression (integers, rationals, `w`) over `ctx`.
pub fn parse_constant(text: &str, ctx: &CyclotomicContext) -> Result<CyclotomicNumber> {
    let empty = VariableSpace::unbounded(std::iter::empty::<String>())?;
    let p = parse_polynomial(text, &empty, ctx)?;
    Ok(p.as_constant().expect("no variables in an empty space"))
}
