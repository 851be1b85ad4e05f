//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ['^' uint]
//! atom    := uint ['/' uint] | ident | '(' expr ')'
//! ```
//!
//! Juxtaposition is rejected: `2x` is a syntax error, write `2*x`.

use std::sync::Arc;

use crate::arith::{Int, Rational};
use crate::error::{Error, Result};

use super::poly::Polynomial;
use super::universe::VarUniverse;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { column, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(bytes[start..i].iter().collect()), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(bytes[start..i].iter().collect()), col));
        } else if "+-*^/()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(syntax(col, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, bytes.len() + 1));
    Ok(out)
}

struct Parser<'u> {
    lx: Lexer,
    universe: &'u Arc<VarUniverse>,
}

impl<'u> Parser<'u> {
    fn peek(&self) -> &Tok {
        &self.lx.toks[self.lx.pos].0
    }

    fn col(&self) -> usize {
        self.lx.toks[self.lx.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.lx.toks[self.lx.pos].clone();
        if self.lx.pos + 1 < self.lx.toks.len() {
            self.lx.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Tok::Op('-') => {
                self.bump();
                -self.term()?
            }
            Tok::Op('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Tok::Op('*') = self.peek() {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if let Tok::Op('-') = self.peek() {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let col = self.col();
            match self.bump().0 {
                Tok::Num(n) => {
                    let e: u32 = n
                        .parse()
                        .map_err(|_| syntax(col, format!("exponent `{n}` is too large")))?;
                    if e > 10_000 {
                        return Err(syntax(col, format!("exponent `{n}` is too large")));
                    }
                    Ok(base.pow(e))
                }
                _ => Err(syntax(col, "expected a non-negative integer exponent after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let (tok, col) = self.bump();
        let atom = match tok {
            Tok::Num(n) => {
                let num: Int = n.parse().map_err(|_| syntax(col, "bad integer literal"))?;
                let mut value = Rational::from_int(num);
                if let Tok::Op('/') = self.peek() {
                    self.bump();
                    let dcol = self.col();
                    match self.bump().0 {
                        Tok::Num(d) => {
                            let den: Int = d.parse().map_err(|_| syntax(dcol, "bad integer literal"))?;
                            if den.is_zero() {
                                return Err(syntax(dcol, "zero denominator"));
                            }
                            value = Rational::new(value.numer().clone(), den);
                        }
                        _ => return Err(syntax(dcol, "expected an integer denominator after `/`")),
                    }
                }
                Polynomial::constant(self.universe, value)
            }
            Tok::Ident(name) => match self.universe.index_of(&name) {
                Some(i) => Polynomial::var(self.universe, i),
                None => return Err(syntax(col, format!("undeclared variable `{name}`"))),
            },
            Tok::Op('(') => {
                let inner = self.expr()?;
                let ccol = self.col();
                match self.bump().0 {
                    Tok::Op(')') => inner,
                    _ => return Err(syntax(ccol, "expected `)`")),
                }
            }
            Tok::End => return Err(syntax(col, "unexpected end of expression")),
            Tok::Op(c) => return Err(syntax(col, format!("unexpected `{c}`"))),
        };
        match self.peek() {
            Tok::Num(_) | Tok::Ident(_) | Tok::Op('(') => Err(syntax(
                self.col(),
                "missing operator (juxtaposition is not multiplication)",
            )),
            _ => Ok(atom),
        }
    }
}

/// Parses an expression over `universe`.
pub fn parse_polynomial(src: &str, universe: &Arc<VarUniverse>) -> Result<Polynomial> {
    let toks = lex(src)?;
    let mut p = Parser { lx: Lexer { toks, pos: 0 }, universe };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        Tok::Op(')') => Err(syntax(p.col(), "unbalanced `)`")),
        _ => Err(syntax(p.col(), "unexpected token")),
    }
}
