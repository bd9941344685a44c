//! Expression grammar shared by every text input:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' INT)?
//! atom  := NUMBER | IDENT | '(' expr ')'
//! ```
//!
//! `NUMBER` is `int` or `int/int` written without spaces; identifiers are
//! `[a-z][a-z0-9]*`. Any other use of `/` is rejected.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Poly, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownVariable { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = text[start..i].parse().expect("digits");
                let mut value = Q::from_integer(num);
                let exponent = matches!(out.last(), Some((Tok::Caret, _)));
                if !exponent && i < bytes.len() && bytes[i] == b'/' {
                    let slash = i;
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(syntax(slash, "`/` must join two integers"));
                    }
                    let den: BigInt = text[dstart..i].parse().expect("digits");
                    if den.is_zero() {
                        return Err(syntax(dstart, "zero denominator"));
                    }
                    value /= Q::from_integer(den);
                }
                out.push((Tok::Num(value), start));
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit())
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            b'/' => {
                return Err(syntax(
                    i,
                    "`/` is only allowed inside a rational literal such as 1/2",
                ))
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character `{ch}`")));
            }
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump().0 {
            Tok::Num(n) if n.is_integer() => {
                let e: u32 = n
                    .numer()
                    .try_into()
                    .map_err(|_| syntax(at, "exponent out of range"))?;
                Ok(base.pow(e))
            }
            _ => Err(syntax(at, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(n) => Ok(Poly::constant(self.vars, n)),
            Tok::Ident(name) => {
                Poly::var(self.vars, &name).map_err(|_| ParseError::UnknownVariable {
                    name,
                    offset: at,
                })
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.offset();
                match self.bump().0 {
                    Tok::RParen => Ok(inner),
                    _ => Err(syntax(close, "expected `)`")),
                }
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            other => Err(syntax(at, format!("unexpected token {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

/// Parses `text` as a polynomial in the declared variables.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, vars };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        t => Err(syntax(p.offset(), format!("unexpected {}", describe(t)))),
    }
}

/// Identifiers occurring in `text`, sorted and deduplicated.
pub fn variables_in(text: &str) -> Result<Vec<String>, ParseError> {
    let set: BTreeSet<String> = lex(text)?
        .into_iter()
        .filter_map(|(t, _)| match t {
            Tok::Ident(s) => Some(s),
            _ => None,
        })
        .collect();
    Ok(set.into_iter().collect())
}

/// Parses `text` over the sorted set of identifiers it mentions.
pub fn parse_poly_infer(text: &str) -> Result<Poly, ParseError> {
    let vars = variables_in(text)?;
    parse_poly(text, &vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn canonical_two_terms() {
        let p = parse_poly("x^2 - 2/3*y", &xy()).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&[2, 0]), qi(1));
        assert_eq!(p.coeff(&[0, 1]), q(-2, 3));
    }

    #[test]
    fn dangling_operator_reports_offset() {
        let e = parse_poly("x + ", &xy()).unwrap_err();
        assert_eq!(e.offset(), 4);
    }

    #[test]
    fn exponent_is_not_read_as_a_fraction() {
        let e = parse_poly("x^2/2", &xy()).unwrap_err();
        assert_eq!(e.offset(), 3);
        let p = parse_poly("x^2*3/4", &xy()).unwrap();
        assert_eq!(p, parse_poly("3/4*x^2", &xy()).unwrap());
    }

    #[test]
    fn unknown_variable() {
        let e = parse_poly("x + z", &xy()).unwrap_err();
        assert_eq!(
            e,
            ParseError::UnknownVariable {
                name: "z".into(),
                offset: 4
            }
        );
    }

    #[test]
    fn general_division_is_rejected() {
        assert!(parse_poly("x/2", &xy()).is_err());
        assert!(parse_poly("1/0", &xy()).is_err());
        assert!(parse_poly("x^y", &xy()).is_err());
        assert!(parse_poly("x^1/2", &xy()).is_err());
    }

    #[test]
    fn precedence_and_unary_minus() {
        let p = parse_poly("-x^2 + (x - y)*(x + y)", &xy()).unwrap();
        assert_eq!(p, parse_poly("-y^2", &xy()).unwrap());
        let r = parse_poly("-(-3)", &xy()).unwrap();
        assert_eq!(r.constant_term(), qi(3));
    }

    #[test]
    fn inferred_variables_are_sorted() {
        let p = parse_poly_infer("zeta*x1 + a").unwrap();
        assert_eq!(p.vars(), &["a", "x1", "zeta"]);
    }
}
