//! Text input for polynomials.
//!
//! Accepts the printed form (`3*T^2+T+6`, `(u+1)*T`, `5/7*T`, and
//! `(T^2+1)*X^8+...` for polynomials in `X`) and, for convenience, products,
//! unary minus, `^` on parenthesized groups and division by nonzero
//! expressions free of `X`.

use std::fmt;

use thiserror::Error;

use super::{RationalFunc, TPoly, XPoly};
use crate::ffield::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok {
    Num(u32),
    T,
    X,
    U,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    field: &'a Field,
    toks: Vec<(Tok, usize, usize, u64)>,
}

impl<'a> Lexer<'a> {
    fn run(field: &'a Field, src: &str) -> Result<Self, ParseError> {
        let p = field.characteristic() as u64;
        let mut toks = Vec::new();
        let (mut line, mut col) = (1, 1);
        let mut chars = src.chars().peekable();
        while let Some(&c) = chars.peek() {
            let (l0, c0) = (line, col);
            let simple = match c {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '/' => Some(Tok::Slash),
                '^' => Some(Tok::Caret),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                'T' => Some(Tok::T),
                'X' => Some(Tok::X),
                'u' => Some(Tok::U),
                _ => None,
            };
            if let Some(t) = simple {
                chars.next();
                toks.push((t, l0, c0, 0));
                col += 1;
            } else if c == '\n' {
                chars.next();
                line += 1;
                col = 1;
            } else if c.is_whitespace() {
                chars.next();
                col += 1;
            } else if c.is_ascii_digit() {
                // keep the residue mod p and the literal value (for exponents)
                let (mut modp, mut raw) = (0u64, 0u64);
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    let d = d.to_digit(10).expect("digit") as u64;
                    modp = (modp * 10 + d) % p;
                    raw = raw.saturating_mul(10).saturating_add(d);
                    chars.next();
                    col += 1;
                }
                toks.push((Tok::Num(modp as u32), l0, c0, raw));
            } else {
                return Err(ParseError { line, column: col, message: format!("unexpected character '{c}'") });
            }
        }
        toks.push((Tok::End, line, col, 0));
        Ok(Lexer { field, toks })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Tok {
        self.lex.toks[self.pos].0
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let (_, line, column, _) = self.lex.toks[self.pos];
        ParseError { line, column, message: message.into() }
    }

    fn bump(&mut self) -> (Tok, u64) {
        let t = self.lex.toks[self.pos];
        self.pos += 1;
        (t.0, t.3)
    }

    fn expr(&mut self) -> Result<XPoly, ParseError> {
        let f = self.lex.field.clone();
        let mut acc = XPoly::zero(&f);
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let term = self.product()?;
            acc = if sign < 0 { &acc - &term } else { &acc + &term };
            sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.bump();
        }
    }

    fn starts_atom(t: Tok) -> bool {
        matches!(t, Tok::Num(_) | Tok::T | Tok::X | Tok::U | Tok::LParen)
    }

    fn product(&mut self) -> Result<XPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.power()?;
                }
                Tok::Slash => {
                    self.bump();
                    let d = self.power()?;
                    acc = self.divide(&acc, &d)?;
                }
                t if Self::starts_atom(t) => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn divide(&self, a: &XPoly, d: &XPoly) -> Result<XPoly, ParseError> {
        if d.degree() != Some(0) {
            return Err(self.err(if d.is_zero() { "division by zero" } else { "can only divide by expressions free of X" }));
        }
        let inv = d.coeff(0).inv().map_err(|_| self.err("division by zero"))?;
        Ok(a.scale(&inv))
    }

    fn power(&mut self) -> Result<XPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Num(_), raw) => {
                if raw > 1 << 20 {
                    self.pos -= 1;
                    return Err(self.err("exponent too large"));
                }
                let mut acc = XPoly::one(self.lex.field);
                for _ in 0..raw {
                    acc = &acc * &base;
                }
                Ok(acc)
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected an exponent"))
            }
        }
    }

    fn atom(&mut self) -> Result<XPoly, ParseError> {
        let f = self.lex.field.clone();
        let konst = |p: TPoly| XPoly::new(&f, vec![RationalFunc::from_poly(p)]);
        match self.peek() {
            Tok::Num(n) => {
                self.bump();
                Ok(konst(TPoly::constant(&f, f.from_int(n as i64))))
            }
            Tok::T => {
                self.bump();
                Ok(konst(TPoly::t(&f)))
            }
            Tok::X => {
                self.bump();
                Ok(XPoly::x(&f))
            }
            Tok::U => match f.generator() {
                Some(u) => {
                    self.bump();
                    Ok(konst(TPoly::constant(&f, u)))
                }
                None => Err(self.err("'u' needs an extension field")),
            },
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Tok::RParen {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(e)
            }
            Tok::End => Err(self.err("unexpected end of input")),
            _ => Err(self.err("expected a number, T, X, u or '('")),
        }
    }
}

pub fn parse_xpoly(field: &Field, src: &str) -> Result<XPoly, ParseError> {
    let lex = Lexer::run(field, src)?;
    let mut p = Parser { lex, pos: 0 };
    let e = p.expr()?;
    if p.peek() != Tok::End {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

fn no_x(field: &Field, src: &str) -> Result<RationalFunc, ParseError> {
    let e = parse_xpoly(field, src)?;
    if e.degree().unwrap_or(0) > 0 {
        return Err(ParseError { line: 1, column: 1, message: "unexpected X".into() });
    }
    Ok(e.coeff(0))
}

pub fn parse_ratfunc(field: &Field, src: &str) -> Result<RationalFunc, ParseError> {
    no_x(field, src)
}

pub fn parse_tpoly(field: &Field, src: &str) -> Result<TPoly, ParseError> {
    let r = no_x(field, src)?;
    r.as_poly().cloned().ok_or(ParseError { line: 1, column: 1, message: "expected a polynomial in T".into() })
}
