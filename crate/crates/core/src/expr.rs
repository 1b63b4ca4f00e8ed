//! Recursive-descent parser for ring scalars and algebra expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | primary ('^' exponent)*
//! primary  := integer | 'A' | 'v'<i> | generator | '(' expr ')'
//! exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//! ```
//!
//! `*` is noncommutative between generator factors. Fractional exponents are
//! accepted only on powers of `A` and must land on a half-integer.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::freealg::{AlgElement, Generator};
use crate::ring::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    A,
    V(usize),
    Gen(char, u32),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'/' => Some(Tok::Slash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
            continue;
        }
        if c.is_ascii_alphabetic() {
            i += 1;
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                return Err(ParseError::new(start, "unknown identifier"));
            }
            let digits = &text[digits_start..i];
            let index: Option<u32> = if digits.is_empty() {
                None
            } else {
                Some(digits.parse().map_err(|_| ParseError::new(digits_start, "index too large"))?)
            };
            let tok = match (c, index) {
                (b'A', None) => Tok::A,
                (b'v', Some(k)) if k >= 1 => Tok::V(k as usize),
                (b'v', _) => return Err(ParseError::new(start, "puncture variables are v1, v2, ...")),
                (b'A', Some(_)) => return Err(ParseError::new(start, "unknown identifier")),
                (ch, idx) => Tok::Gen(ch as char, idx.unwrap_or(0)),
            };
            out.push((start, tok));
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(ParseError::new(start, format!("unexpected character {ch:?}")));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    arity: usize,
    alphabet: &'a [Generator],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        match self.peek() {
            None => ParseError::new(self.end, format!("unexpected end of input, expected {what}")),
            Some(t) => ParseError::new(self.offset(), format!("unexpected {t:?}, expected {what}")),
        }
    }

    fn expr(&mut self) -> Result<AlgElement, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AlgElement, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AlgElement, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let mut base = self.primary()?;
        while self.peek() == Some(&Tok::Caret) {
            let at = self.offset();
            self.pos += 1;
            let (num, den) = self.exponent()?;
            base = power(&base, &num, &den).map_err(|m| ParseError::new(at, m))?;
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<AlgElement, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(AlgElement::scalar(LaurentPoly::constant(self.arity, n))),
            Some(Tok::A) => Ok(AlgElement::scalar(LaurentPoly::a_pow(self.arity, 1))),
            Some(Tok::V(i)) => {
                if i > self.arity {
                    return Err(ParseError::new(at, format!("v{i} exceeds the {} puncture variables", self.arity)));
                }
                Ok(AlgElement::scalar(LaurentPoly::v_pow(self.arity, i, 1)))
            }
            Some(Tok::Gen(name, index)) => {
                let g = Generator::new(name, index);
                if self.alphabet.contains(&g) {
                    Ok(AlgElement::generator(self.arity, g))
                } else {
                    Err(ParseError::new(at, format!("unknown generator {g}")))
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a factor"))
            }
        }
    }

    fn signed_int(&mut self) -> Result<BigInt, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.unexpected("an integer exponent")),
        }
    }

    fn exponent(&mut self) -> Result<(BigInt, BigInt), ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let num = self.signed_int()?;
            let den = if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let at = self.offset();
                let d = self.signed_int()?;
                if !d.is_positive() {
                    return Err(ParseError::new(at, "exponent denominator must be positive"));
                }
                d
            } else {
                BigInt::one()
            };
            self.expect(Tok::RParen, "')'")?;
            Ok((num, den))
        } else {
            Ok((self.signed_int()?, BigInt::one()))
        }
    }
}

fn power(base: &AlgElement, num: &BigInt, den: &BigInt) -> Result<AlgElement, String> {
    let g = num_integer_gcd(num, den);
    let (num, den) = (num / &g, den / &g);
    let k = num.to_i64().ok_or("exponent too large")?;
    if den.is_one() && k >= 0 {
        let k = u32::try_from(k).map_err(|_| "exponent too large".to_string())?;
        return Ok(base.pow(k));
    }
    let scalar = base.as_scalar().ok_or("negative or fractional powers need a scalar base")?;
    if den.is_one() {
        let p = scalar.pow(k).ok_or("negative powers need an invertible base")?;
        return Ok(AlgElement::scalar(p));
    }
    let (c, m) = scalar.as_single_term().ok_or("fractional powers need a power of A")?;
    let d = den.to_i64().ok_or("exponent denominator too large")?;
    if !c.is_one() || m.vexp.iter().any(|&e| e != 0) || (m.half_a * k) % d != 0 {
        return Err("fractional powers are only defined on A and must be half-integral".into());
    }
    Ok(AlgElement::scalar(LaurentPoly::a_half_pow(scalar.arity(), m.half_a * k / d)))
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a.is_zero() {
        BigInt::one()
    } else {
        a
    }
}

fn run(text: &str, alphabet: &[Generator], arity: usize, toks: Vec<(usize, Tok)>) -> Result<AlgElement, ParseError> {
    let mut p = Parser { toks, pos: 0, end: text.len(), arity, alphabet };
    if p.toks.is_empty() {
        return Err(ParseError::new(0, "empty input"));
    }
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected("'+', '-', '*' or end of input"));
    }
    Ok(e)
}

/// Parses an algebra expression over the given generator alphabet.
pub fn parse_expression(text: &str, alphabet: &[Generator], arity: usize) -> Result<AlgElement, ParseError> {
    let toks = tokenize(text)?;
    run(text, alphabet, arity, toks)
}

/// Parses a scalar. With `arity == None` the arity is the largest `v` index used.
pub fn parse_scalar(text: &str, arity: Option<usize>) -> Result<LaurentPoly, ParseError> {
    let toks = tokenize(text)?;
    let arity = arity.unwrap_or_else(|| {
        toks.iter().filter_map(|(_, t)| if let Tok::V(i) = t { Some(*i) } else { None }).max().unwrap_or(0)
    });
    let e = run(text, &[], arity, toks)?;
    Ok(e.as_scalar().expect("no generators in a scalar expression"))
}
