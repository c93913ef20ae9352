//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar: sums and differences of products; factors are integers (reduced
//! into the prime field), `#k` element literals, identifiers, or
//! parenthesised expressions, each optionally raised to `^n`. A number
//! directly followed by an identifier or parenthesis multiplies it.

use std::sync::Arc;

use super::MultiPoly;
use crate::error::{Error, Result};
use crate::field::FieldCtx;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Elem(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                if chars.get(i + 1) == Some(&'*') {
                    out.push(Tok::Caret);
                    i += 2;
                } else {
                    out.push(Tok::Star);
                    i += 1;
                }
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '#' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(Error::Parse(format!("expected digits after '#' at offset {i}")));
                }
                let s: String = chars[start..j].iter().collect();
                let k = s
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("element literal #{s} too large")))?;
                out.push(Tok::Elem(k));
                i = j;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                out.push(Tok::Int(chars[i..j].iter().collect()));
                i = j;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push(Tok::Ident(chars[i..j].iter().collect()));
                i = j;
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} at offset {i}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a Arc<FieldCtx>,
    vars: Vec<String>,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.signed_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed_term(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.signed_term()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.signed_term()
            }
            _ => self.term(),
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = if matches!(self.peek(), Some(Tok::Minus)) {
                        self.pos += 1;
                        self.power()?.neg()
                    } else {
                        self.power()?
                    };
                    acc = acc.mul(&f)?;
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) | Some(Tok::Int(_)) | Some(Tok::Elem(_)) => {
                    let f = self.power()?;
                    acc = acc.mul(&f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(s)) => {
                    let e = s
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("exponent {s} too large")))?;
                    Ok(base.pow(e))
                }
                other => Err(Error::Parse(format!("expected a non-negative integer exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let ctx = self.ctx;
        match self.next() {
            Some(Tok::Int(s)) => {
                let p = ctx.characteristic() as u128;
                let mut v: u128 = 0;
                for d in s.bytes() {
                    v = (v * 10 + (d - b'0') as u128) % p;
                }
                Ok(MultiPoly::constant_with(ctx, &self.vars, ctx.from_int(v as i64)))
            }
            Some(Tok::Elem(k)) => {
                let e = u32::try_from(k)
                    .ok()
                    .and_then(|k| ctx.element(k))
                    .ok_or_else(|| Error::Parse(format!("element literal #{k} outside field of order {}", ctx.q())))?;
                Ok(MultiPoly::constant_with(ctx, &self.vars, e))
            }
            Some(Tok::Ident(name)) => MultiPoly::var_with(ctx, &self.vars, &name),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    other => Err(Error::Parse(format!("expected ')', found {other:?}"))),
                }
            }
            Some(Tok::Minus) => Ok(self.power()?.neg()),
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub(super) fn parse(ctx: &Arc<FieldCtx>, src: &str, fixed: Option<&Vec<String>>) -> Result<MultiPoly> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let vars = match fixed {
        Some(v) => {
            for t in &toks {
                if let Tok::Ident(name) = t {
                    if !v.contains(name) {
                        return Err(Error::UnknownVariable(name.clone()));
                    }
                }
            }
            v.clone()
        }
        None => {
            let mut seen: Vec<String> = Vec::new();
            for t in &toks {
                if let Tok::Ident(name) = t {
                    if !seen.contains(name) {
                        seen.push(name.clone());
                    }
                }
            }
            seen
        }
    };
    let mut p = Parser { ctx, vars, toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {:?}", p.toks[p.pos])));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn precedence_and_reduction() {
        let f7 = make_field(7, 1).unwrap();
        let a = MultiPoly::parse(&f7, "2*x^2 - 3x + 15").unwrap();
        let b = MultiPoly::from_terms(
            &f7,
            &["x"],
            [(vec![2], f7.from_int(2)), (vec![1], f7.from_int(4)), (vec![0], f7.from_int(1))],
        )
        .unwrap();
        assert_eq!(a, b);
        let c = MultiPoly::parse(&f7, "-(a+x)^2*2").unwrap();
        assert_eq!(c.coeff(&[1, 1]), f7.from_int(-4));
        assert_eq!(c.vars(), &["a".to_string(), "x".to_string()]);
        let big = MultiPoly::parse(&f7, "100000000000000000000000000000000000001").unwrap();
        assert_eq!(big.constant_term(), f7.from_int(((10u128.pow(38) + 1) % 7) as i64));
    }

    #[test]
    fn element_literals() {
        let f9 = make_field(3, 2).unwrap();
        let p = MultiPoly::parse(&f9, "#4*t + #8").unwrap();
        assert_eq!(p.coeff(&[1]).index(), 4);
        assert!(MultiPoly::parse(&f9, "#9").is_err());
    }

    #[test]
    fn errors() {
        let f5 = make_field(5, 1).unwrap();
        for bad in ["", "x +", "(x", "x ^ y", "x $ 2", "x)"] {
            assert!(MultiPoly::parse(&f5, bad).is_err(), "{bad:?} accepted");
        }
        assert_eq!(
            MultiPoly::parse_with_vars(&f5, "a + z", &["a", "x"]).unwrap_err(),
            Error::UnknownVariable("z".into())
        );
    }
}
