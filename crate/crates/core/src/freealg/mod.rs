//! Words and noncommutative polynomials over a [`Scalar`] field.
//!
//! Letters are indices into an [`Alphabet`]; the letter order is index
//! order. Words compare degree-lexicographically, which is a well-order
//! compatible with concatenation.

mod parse;

pub use parse::{parse_poly, parse_scalar, parse_univariate, ParseError, SymbolTable};

use crate::scalars::Scalar;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error("duplicate letter name `{0}`")]
    DuplicateLetter(String),
    #[error("invalid letter name `{0}`")]
    InvalidLetterName(String),
    #[error("letter index {index} outside alphabet of size {size}")]
    LetterOutOfRange { index: u32, size: usize },
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
}

/// An ordered list of uniquely named generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

fn valid_letter_name(name: &str) -> bool {
    let core = name.trim_end_matches('\'');
    let (ident, bracket) = match core.find('[') {
        Some(k) => (&core[..k], Some(&core[k..])),
        None => (core, None),
    };
    let mut chars = ident.chars();
    let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    let bracket_ok = bracket.is_none_or(|b| {
        b.len() > 2
            && b.ends_with(']')
            && b[1..b.len() - 1].split(',').all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_digit()))
    });
    head_ok && tail_ok && bracket_ok
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Alphabet, FreeAlgError> {
        let mut out = Alphabet { names: Vec::new(), index: HashMap::new() };
        for name in names {
            let name = name.into();
            if !valid_letter_name(&name) {
                return Err(FreeAlgError::InvalidLetterName(name));
            }
            if out.index.contains_key(&name) {
                return Err(FreeAlgError::DuplicateLetter(name));
            }
            out.index.insert(name.clone(), out.names.len() as u32);
            out.names.push(name);
        }
        Ok(out)
    }

    pub fn empty() -> Alphabet {
        Alphabet { names: Vec::new(), index: HashMap::new() }
    }

    /// Letters `sym[i,j]` for `1 <= i <= rows`, `1 <= j <= cols`, in lexicographic order.
    pub fn matrix(sym: &str, rows: usize, cols: usize) -> Alphabet {
        let names = (1..=rows).flat_map(|i| (1..=cols).map(move |j| format!("{sym}[{i},{j}]")));
        Alphabet::new(names).expect("matrix letter names are valid and distinct")
    }

    /// `self` followed by `other`; colliding names of `other` get primes appended.
    pub fn disjoint_union(&self, other: &Alphabet) -> Alphabet {
        let mut names = self.names.clone();
        for name in &other.names {
            let mut n = name.clone();
            while names.contains(&n) || (other.index.contains_key(&n) && n != *name) {
                n.push('\'');
            }
            names.push(n);
        }
        Alphabet::new(names).expect("primed names are distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, letter: u32) -> &str {
        &self.names[letter as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn check_word(&self, w: &Word) -> Result<(), FreeAlgError> {
        match w.letters().iter().find(|&&x| x as usize >= self.len()) {
            Some(&index) => Err(FreeAlgError::LetterOutOfRange { index, size: self.len() }),
            None => Ok(()),
        }
    }

    pub fn check_poly(&self, f: &NcPoly) -> Result<(), FreeAlgError> {
        f.terms().try_for_each(|(w, _)| self.check_word(w))
    }
}

/// A monomial: a finite sequence of letter indices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[u32; 6]>);

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }

    pub fn letter(x: u32) -> Word {
        Word(smallvec::smallvec![x])
    }

    pub fn from_letters(letters: &[u32]) -> Word {
        Word(SmallVec::from_slice(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word::from_letters(&self.0[from..to])
    }

    /// Whether `pattern` occurs at position `pos`.
    pub fn matches_at(&self, pattern: &Word, pos: usize) -> bool {
        pos + pattern.len() <= self.len() && self.0[pos..pos + pattern.len()] == pattern.0[..]
    }

    /// Positions where `pattern` occurs as a factor.
    pub fn occurrences(&self, pattern: &Word) -> Vec<usize> {
        if pattern.len() > self.len() {
            return Vec::new();
        }
        (0..=self.len() - pattern.len()).filter(|&p| self.matches_at(pattern, p)).collect()
    }

    /// Replaces the factor `[pos, pos + len)` with `mid`.
    pub fn splice(&self, pos: usize, len: usize, mid: &Word) -> Word {
        let mut v: SmallVec<[u32; 6]> = SmallVec::with_capacity(self.len() - len + mid.len());
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(&mid.0);
        v.extend_from_slice(&self.0[pos + len..]);
        Word(v)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alphabet }
    }
}

/// Degree-lexicographic order: shorter words first, then letter by letter.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0.as_slice())
    }
}

pub fn compare_words(u: &Word, v: &Word) -> Ordering {
    u.cmp(v)
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (k, &x) in self.word.letters().iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.alphabet.name(x))?;
        }
        Ok(())
    }
}

/// A finite scalar combination of words with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct NcPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn constant(c: Scalar) -> NcPoly {
        NcPoly::monomial(Word::empty(), c)
    }

    pub fn one() -> NcPoly {
        NcPoly::constant(Scalar::one())
    }

    pub fn letter(x: u32) -> NcPoly {
        NcPoly::monomial(Word::letter(x), Scalar::one())
    }

    pub fn word(w: Word) -> NcPoly {
        NcPoly::monomial(w, Scalar::one())
    }

    pub fn monomial(w: Word, c: Scalar) -> NcPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NcPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    /// Builds a polynomial from a map, dropping zero coefficients.
    pub fn from_terms(mut terms: BTreeMap<Word, Scalar>) -> NcPoly {
        terms.retain(|_, c| !c.is_zero());
        NcPoly { terms }
    }

    /// The largest support word strictly below `bound` (or overall when `None`).
    pub fn largest_word_below(&self, bound: Option<&Word>) -> Option<&Word> {
        match bound {
            None => self.terms.keys().next_back(),
            Some(b) => self.terms.range(..b).next_back().map(|(w, _)| w),
        }
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The constant term when `self` has no word of positive length.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    /// Adds `c * w`, dropping the term if it cancels.
    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn remove_term(&mut self, w: &Word) -> Option<Scalar> {
        self.terms.remove(w)
    }

    /// Adds `c * u * g * v`.
    pub fn add_scaled_product(&mut self, c: &Scalar, u: &Word, g: &NcPoly, v: &Word) {
        for (w, a) in &g.terms {
            self.add_term(u.concat(w).concat(v), &(c * a));
        }
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    /// Largest word length in the support; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn leading_term(&self) -> Result<(&Word, &Scalar), FreeAlgError> {
        self.terms.iter().next_back().ok_or(FreeAlgError::ZeroPolynomial)
    }

    /// Every word reversed (the image in the opposite algebra).
    pub fn reversed(&self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, a)| (w.reversed(), a.clone())).collect() }
    }

    /// Substitutes `images[x]` for each letter `x`. With `reverse`, each word
    /// is read right to left, which realizes an anti-homomorphism.
    pub fn substitute(&self, images: &[NcPoly], reverse: bool) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, a) in &self.terms {
            let mut acc = NcPoly::constant(a.clone());
            let letters: Vec<u32> =
                if reverse { w.letters().iter().rev().copied().collect() } else { w.letters().to_vec() };
            for x in letters {
                acc = &acc * &images[x as usize];
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        out
    }

    /// Renames letters through `f`, which must be injective on the support.
    pub fn map_letters(&self, f: impl Fn(u32) -> u32) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, a) in &self.terms {
            let w2 = Word(w.letters().iter().map(|&x| f(x)).collect());
            out.add_term(w2, a);
        }
        out
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, alphabet }
    }
}

pub fn poly_multiply(f: &NcPoly, g: &NcPoly) -> NcPoly {
    f * g
}

pub fn leading_term(f: &NcPoly) -> Result<(Word, Scalar), FreeAlgError> {
    f.leading_term().map(|(w, c)| (w.clone(), c.clone()))
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (w, a) in &small.terms {
            big.add_term(w.clone(), a);
        }
        big
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, a) in &rhs.terms {
            out.add_term(w.clone(), &-a);
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, a)| (w.clone(), -a)).collect() }
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), &(a * b));
            }
        }
        out
    }
}

macro_rules! forward_poly {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<NcPoly> for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: NcPoly) -> NcPoly { (&self).$m(&rhs) }
        }
        impl $tr<&NcPoly> for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: &NcPoly) -> NcPoly { (&self).$m(rhs) }
        }
    )*};
}

forward_poly!(Add add, Sub sub, Mul mul);

pub struct PolyDisplay<'a> {
    poly: &'a NcPoly,
    alphabet: &'a Alphabet,
}

/// A scalar that prints as a single signed factor needs no parentheses.
fn is_simple_scalar(c: &Scalar) -> bool {
    let s = c.to_string();
    let body = s.strip_prefix('-').unwrap_or(&s);
    !body.contains('+') && !body.contains('-')
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.poly.terms.iter().rev().enumerate() {
            let (neg, mag) = if is_simple_scalar(c) && c.to_string().starts_with('-') { (true, -c) } else { (false, c.clone()) };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let coef = if is_simple_scalar(&mag) { mag.to_string() } else { format!("({mag})") };
            if w.is_empty() {
                f.write_str(&coef)?;
            } else if mag.is_one() {
                write!(f, "{}", w.display(self.alphabet))?;
            } else {
                write!(f, "{coef}*{}", w.display(self.alphabet))?;
            }
        }
        Ok(())
    }
}
