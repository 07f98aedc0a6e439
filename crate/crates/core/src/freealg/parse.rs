//! Recursive-descent parser for scalar literals and noncommutative polynomials.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (['*'|'/'] power | power)*     juxtaposition multiplies
//! power  := atom ['^' integer]
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! A name is a letter of the alphabet or a root adjoined in the tower.
//! Division is only allowed by nonzero constants.

use super::{Alphabet, NcPoly, Word};
use crate::scalars::{FieldTower, Scalar};
use num::{BigInt, BigRational};
use std::sync::Arc;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("column {col}: {msg}")]
pub struct ParseError {
    pub col: usize,
    pub msg: String,
}

/// Names visible to the parser: alphabet letters and tower roots.
#[derive(Clone)]
pub struct SymbolTable<'a> {
    alphabet: Option<&'a Alphabet>,
    tower: Arc<FieldTower>,
}

impl<'a> SymbolTable<'a> {
    pub fn new(alphabet: &'a Alphabet) -> Self {
        SymbolTable { alphabet: Some(alphabet), tower: FieldTower::rationals() }
    }

    pub fn scalars(tower: &Arc<FieldTower>) -> Self {
        SymbolTable { alphabet: None, tower: tower.clone() }
    }

    pub fn with_tower(mut self, tower: &Arc<FieldTower>) -> Self {
        self.tower = tower.clone();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let start = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let mut end = k;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            let digits: String = chars[k..end].iter().collect();
            out.push((start, Tok::Int(digits.parse().expect("digits parse"))));
            k = end;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = k;
            while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_') {
                end += 1;
            }
            if end < chars.len() && chars[end] == '[' {
                let close = chars[end..]
                    .iter()
                    .position(|&x| x == ']')
                    .ok_or(ParseError { col: end + 1, msg: "unclosed `[`".into() })?;
                end += close + 1;
            }
            while end < chars.len() && chars[end] == '\'' {
                end += 1;
            }
            out.push((start, Tok::Name(chars[k..end].iter().collect())));
            k = end;
        } else if "+-*/^()".contains(c) {
            out.push((start, Tok::Sym(c)));
            k += 1;
        } else {
            return Err(ParseError { col: start, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'s, 'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    syms: &'s SymbolTable<'a>,
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { col: self.col(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NcPoly, ParseError> {
        let mut acc = NcPoly::zero();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Name(_) | Tok::Sym('(')))
    }

    fn term(&mut self) -> Result<NcPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let col = self.col();
                let d = self.power()?;
                let c = d.as_constant().filter(|c| !c.is_zero()).ok_or(ParseError {
                    col,
                    msg: "division only by a nonzero constant".into(),
                })?;
                acc = acc.scale(&c.inv().expect("nonzero"));
            } else if self.starts_atom() {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<NcPoly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.peek() {
            Some(Tok::Int(n)) => u32::try_from(n).ok(),
            _ => None,
        };
        let Some(e) = e else { return self.err("expected a small exponent after `^`") };
        self.pos += 1;
        let mut acc = NcPoly::one();
        for _ in 0..e {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<NcPoly, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let q = Scalar::rational_in(&self.syms.tower, BigRational::from_integer(n));
                Ok(NcPoly::constant(q))
            }
            Some(Tok::Name(name)) => {
                if let Some(x) = self.syms.alphabet.and_then(|a| a.lookup(&name)) {
                    self.pos += 1;
                    return Ok(NcPoly::letter(x));
                }
                if let Some(k) = self.syms.tower.level_by_name(&name) {
                    self.pos += 1;
                    return Ok(NcPoly::constant(self.syms.tower.generator(k)));
                }
                self.err(format!("unknown symbol `{name}`"))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial over the table's alphabet and tower.
pub fn parse_poly(src: &str, syms: &SymbolTable<'_>) -> Result<NcPoly, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1, syms };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let f = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses a scalar literal such as `1/2+3/4*q-2*i` or `2i`.
pub fn parse_scalar(src: &str, tower: &Arc<FieldTower>) -> Result<Scalar, ParseError> {
    let f = parse_poly(src, &SymbolTable::scalars(tower))?;
    let c = f.as_constant().expect("no letters without an alphabet");
    Ok(if c.is_zero() { Scalar::rational_in(tower, BigRational::from_integer(0.into())) } else { c })
}

/// Parses a polynomial in one variable `x` as coefficient list, constant first.
pub fn parse_univariate(src: &str, var: &str, tower: &Arc<FieldTower>) -> Result<Vec<Scalar>, ParseError> {
    let alphabet = Alphabet::new([var]).map_err(|e| ParseError { col: 1, msg: e.to_string() })?;
    let f = parse_poly(src, &SymbolTable::new(&alphabet).with_tower(tower))?;
    let deg = f.degree().unwrap_or(0);
    let mut coeffs = vec![Scalar::zero(); deg + 1];
    for (w, c) in f.terms() {
        coeffs[w.len()] = c.clone();
    }
    Ok(coeffs)
}

impl Word {
    /// Parses a product of letters such as `z[1,2]*z[2,1]` (or `1` for the empty word).
    pub fn parse(src: &str, alphabet: &Alphabet) -> Result<Word, ParseError> {
        let f = parse_poly(src, &SymbolTable::new(alphabet))?;
        let single = match f.terms().next() {
            Some((w, c)) if f.len() == 1 && c.is_one() => Some(w.clone()),
            _ => None,
        };
        single.ok_or_else(|| ParseError { col: 1, msg: format!("`{src}` is not a single word") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldTower;

    fn tower_iq() -> Arc<FieldTower> {
        let t = FieldTower::rationals().adjoin("i", &Scalar::zero(), &Scalar::one()).unwrap();
        t.adjoin("q", &Scalar::from_int(-3), &Scalar::one()).unwrap()
    }

    #[test]
    fn scalar_literals() {
        let t = tower_iq();
        let x = parse_scalar("1/2+3/4*q-2*i", &t).unwrap();
        assert_eq!(x.to_string(), "1/2-2*i+3/4*q");
        assert_eq!(parse_scalar("2i", &t).unwrap().to_string(), "2*i");
        assert_eq!(parse_scalar("-(1+i)^2", &t).unwrap().to_string(), "-2*i");
        assert_eq!(parse_scalar("1/(1+i)", &t).unwrap().to_string(), "1/2-1/2*i");
    }

    #[test]
    fn display_round_trips() {
        let t = tower_iq();
        for src in ["0", "-7/3", "i*q-1/5", "3+2*i*q", "-q"] {
            let x = parse_scalar(src, &t).unwrap();
            assert_eq!(parse_scalar(&x.to_string(), &t).unwrap(), x);
        }
        let a = Alphabet::matrix("z", 2, 2);
        let syms = SymbolTable::new(&a).with_tower(&t);
        let f = parse_poly("z[2,1]*z[1,1] - q*z[1,1]*z[2,1] + (1+i) - (2-i)*z[1,2]", &syms).unwrap();
        let printed = f.display(&a).to_string();
        assert_eq!(parse_poly(&printed, &syms).unwrap(), f);
    }

    #[test]
    fn errors_are_located() {
        let t = tower_iq();
        let e = parse_scalar("1 + w", &t).unwrap_err();
        assert_eq!(e.col, 5);
        assert!(parse_scalar("1/0", &t).is_err());
        assert!(parse_scalar("(1", &t).is_err());
        assert!(parse_scalar("", &t).is_err());
        let a = Alphabet::new(["x"]).unwrap();
        assert!(parse_poly("1/x", &SymbolTable::new(&a)).is_err());
    }

    #[test]
    fn univariate_coefficients() {
        let t = FieldTower::rationals();
        let c = parse_univariate("x^2 - 5/2*x + 1", "x", &t).unwrap();
        assert_eq!(c, vec![Scalar::one(), Scalar::from_ratio(-5, 2), Scalar::one()]);
    }

    #[test]
    fn word_parsing() {
        let a = Alphabet::matrix("z", 2, 2);
        let w = Word::parse("z[1,2]*z[2,1]", &a).unwrap();
        assert_eq!(w.letters(), &[1, 2]);
        assert_eq!(Word::parse("1", &a).unwrap(), Word::empty());
        assert!(Word::parse("2*z[1,1]", &a).is_err());
    }
}
