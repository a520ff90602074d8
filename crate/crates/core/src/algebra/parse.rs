//! Recursive-descent parser for the ring text form.
//!
//! Grammar: sums and differences of products of powers of atoms, where an
//! atom is an integer, a rational literal `p/q`, a symbol of the ring, or a
//! parenthesised expression.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{CoeffRing, RingElem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize, String)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push((Tok::Num(s.parse().unwrap()), pos, s));
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push((Tok::Ident(s.clone()), pos, s));
            continue;
        }
        let tok = match ch {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(Error::parse(ch.to_string(), pos, "unexpected character")),
        };
        out.push((tok, pos, ch.to_string()));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<CoeffRing>,
    toks: Vec<(Tok, usize, String)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn error_here(&self, message: &str) -> Error {
        match self.toks.get(self.at) {
            Some((_, pos, s)) => Error::parse(s.clone(), *pos, message),
            None => Error::parse("<end>", self.end, message),
        }
    }

    fn expr(&mut self) -> Result<RingElem> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = acc.checked_add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingElem> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.at += 1;
            acc = acc.checked_mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RingElem> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.at += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.try_into().map_err(|_| self.error_here("exponent too large"))?;
                    self.at += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.error_here("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RingElem> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                let mut value = BigRational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.at += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            self.at += 1;
                            value /= BigRational::from_integer(d);
                        }
                        _ => return Err(self.error_here("expected a nonzero denominator")),
                    }
                }
                RingElem::from_rational(self.ring, value).map_err(|e| match e {
                    Error::NotIntegral(_) => {
                        let (_, pos, s) = &self.toks[self.at - 1];
                        Error::parse(s.clone(), *pos, "fraction in an integral ring")
                    }
                    other => other,
                })
            }
            Some(Tok::Ident(name)) => match self.ring.symbol_index(&name) {
                Some(i) => {
                    self.at += 1;
                    RingElem::symbol(self.ring, i)
                }
                None => Err(self.error_here("unknown symbol")),
            },
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.at += 1;
                        Ok(inner)
                    }
                    _ => Err(self.error_here("expected `)`")),
                }
            }
            _ => Err(self.error_here("expected a number, symbol or `(`")),
        }
    }
}

pub(super) fn parse_ring_elem(ring: &Arc<CoeffRing>, text: &str) -> Result<RingElem> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        ring,
        toks,
        at: 0,
        end: text.len(),
    };
    let value = parser.expr()?;
    if parser.at != parser.toks.len() {
        return Err(parser.error_here("unexpected trailing input"));
    }
    Ok(value)
}
