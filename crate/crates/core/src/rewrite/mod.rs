//! Oriented reduction systems on a free algebra, in the sense of Bergman's
//! diamond lemma.
//!
//! A [`RewriteSystem`] replaces occurrences of each rule's leading word by a
//! combination of strictly smaller words. Normal forms are computed with a
//! fixed strategy (largest reducible word, leftmost position, first rule) so
//! step counts and traces are reproducible.

mod ambiguity;
mod count;

pub use ambiguity::{
    certify_confluence, find_ambiguities, Ambiguity, AmbiguityKind, AmbiguityReport, ConfluenceCertificate,
    ConfluenceReport, ConfluenceVerdict, Resolution,
};
pub use count::{count_irreducible, enumerate_irreducible, FactorAutomaton};

use crate::freealg::{Alphabet, FreeAlgError, NcPoly, Word};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("rule {0} has an empty leading word")]
    EmptyLhs(usize),
    #[error("rule {rule}: right side word {word} is not smaller than the leading word")]
    NotDecreasing { rule: usize, word: String },
    #[error("rules {0} and {1} share a leading word")]
    DuplicateLhs(usize, usize),
    #[error(transparent)]
    Alphabet(#[from] FreeAlgError),
}

/// `lhs -> rhs` with every word of `rhs` smaller than `lhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NcPoly,
}

/// One rule application inside a reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: usize,
    pub word: Word,
    pub position: usize,
}

#[derive(Debug, Clone)]
pub struct RewriteSystem {
    alphabet: Alphabet,
    rules: Vec<Rule>,
    by_first_letter: HashMap<u32, Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub normal_form: NcPoly,
    pub steps: usize,
    pub trace: Vec<Step>,
}

impl RewriteSystem {
    pub fn new(alphabet: Alphabet, rules: Vec<Rule>) -> Result<RewriteSystem, RewriteError> {
        let mut seen: HashMap<&Word, usize> = HashMap::new();
        for (k, rule) in rules.iter().enumerate() {
            if rule.lhs.is_empty() {
                return Err(RewriteError::EmptyLhs(k));
            }
            alphabet.check_word(&rule.lhs)?;
            alphabet.check_poly(&rule.rhs)?;
            if let Some((w, _)) = rule.rhs.terms().find(|(w, _)| **w >= rule.lhs) {
                return Err(RewriteError::NotDecreasing { rule: k, word: w.display(&alphabet).to_string() });
            }
            if let Some(&j) = seen.get(&rule.lhs) {
                return Err(RewriteError::DuplicateLhs(j, k));
            }
            seen.insert(&rule.lhs, k);
        }
        let mut by_first_letter: HashMap<u32, Vec<usize>> = HashMap::new();
        for (k, rule) in rules.iter().enumerate() {
            by_first_letter.entry(rule.lhs.letters()[0]).or_default().push(k);
        }
        Ok(RewriteSystem { alphabet, rules, by_first_letter })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Whether some leading word is a factor of another one.
    pub fn has_inclusions(&self) -> bool {
        self.rules.iter().enumerate().any(|(a, ra)| {
            self.rules.iter().enumerate().any(|(b, rb)| a != b && !ra.lhs.occurrences(&rb.lhs).is_empty())
        })
    }

    /// Leftmost position with a matching rule, and the first such rule.
    pub fn find_redex(&self, w: &Word) -> Option<(usize, usize)> {
        let letters = w.letters();
        (0..letters.len()).find_map(|pos| {
            self.by_first_letter
                .get(&letters[pos])?
                .iter()
                .find(|&&r| w.matches_at(&self.rules[r].lhs, pos))
                .map(|&r| (pos, r))
        })
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        self.find_redex(w).is_none()
    }

    /// `c * w` with the factor at `pos` replaced through rule `r`, as a polynomial.
    pub fn apply_at(&self, w: &Word, pos: usize, r: usize) -> NcPoly {
        let rule = &self.rules[r];
        debug_assert!(w.matches_at(&rule.lhs, pos));
        let prefix = w.slice(0, pos);
        let suffix = w.slice(pos + rule.lhs.len(), w.len());
        let mut out = NcPoly::zero();
        out.add_scaled_product(&crate::scalars::Scalar::one(), &prefix, &rule.rhs, &suffix);
        out
    }

    fn reduce_inner(&self, f: &NcPoly, record: bool) -> Reduction {
        let mut poly = f.clone();
        let mut steps = 0;
        let mut trace = Vec::new();
        let mut bound: Option<Word> = None;
        // Words above `bound` are irreducible and no step can create them again.
        while let Some(w) = poly.largest_word_below(bound.as_ref()).cloned() {
            if let Some((pos, r)) = self.find_redex(&w) {
                let c = poly.remove_term(&w).expect("support word");
                let rule = &self.rules[r];
                let prefix = w.slice(0, pos);
                let suffix = w.slice(pos + rule.lhs.len(), w.len());
                poly.add_scaled_product(&c, &prefix, &rule.rhs, &suffix);
                steps += 1;
                if record {
                    trace.push(Step { rule: r, word: w.clone(), position: pos });
                }
            }
            bound = Some(w);
        }
        Reduction { normal_form: poly, steps, trace }
    }

    /// Normal form under the fixed strategy, with the number of rule applications.
    pub fn reduce(&self, f: &NcPoly) -> (NcPoly, usize) {
        let r = self.reduce_inner(f, false);
        (r.normal_form, r.steps)
    }

    /// Like [`reduce`](Self::reduce) but records every rule application.
    pub fn reduce_traced(&self, f: &NcPoly) -> Reduction {
        self.reduce_inner(f, true)
    }

    /// Reduces with a caller-chosen strategy: `choose(n)` picks one of the
    /// `n` currently available (word, position, rule) redexes.
    pub fn reduce_by(&self, f: &NcPoly, mut choose: impl FnMut(usize) -> usize) -> NcPoly {
        let mut poly = f.clone();
        loop {
            let mut redexes = Vec::new();
            for (w, _) in poly.terms() {
                for pos in 0..w.len() {
                    for (r, rule) in self.rules.iter().enumerate() {
                        if w.matches_at(&rule.lhs, pos) {
                            redexes.push((w.clone(), pos, r));
                        }
                    }
                }
            }
            if redexes.is_empty() {
                return poly;
            }
            let (w, pos, r) = redexes.swap_remove(choose(redexes.len()) % redexes.len());
            let c = poly.remove_term(&w).expect("support word");
            let replaced = self.apply_at(&w, pos, r);
            poly = &poly + &replaced.scale(&c);
        }
    }

    /// `lhs -> rhs` lines for reports.
    pub fn rule_strings(&self) -> Vec<String> {
        self.rules
            .iter()
            .map(|r| format!("{} -> {}", r.lhs.display(&self.alphabet), r.rhs.display(&self.alphabet)))
            .collect()
    }

    pub fn format_step(&self, s: &Step) -> String {
        format!("rule {} at {} in {}", s.rule, s.position, s.word.display(&self.alphabet))
    }
}

/// Free-function form of [`RewriteSystem::reduce`].
pub fn reduce(f: &NcPoly, s: &RewriteSystem) -> (NcPoly, usize) {
    s.reduce(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{parse_poly, SymbolTable};

    fn sys(letters: &[&str], rules: &[(&str, &str)]) -> Result<RewriteSystem, RewriteError> {
        let a = Alphabet::new(letters.iter().copied()).unwrap();
        let syms = SymbolTable::new(&a);
        let rules = rules
            .iter()
            .map(|(l, r)| Rule { lhs: Word::parse(l, &a).unwrap(), rhs: parse_poly(r, &syms).unwrap() })
            .collect();
        RewriteSystem::new(a.clone(), rules)
    }

    #[test]
    fn rejects_non_decreasing_rules() {
        let e = sys(&["x", "y"], &[("x*y", "y*x")]).unwrap_err();
        assert!(matches!(e, RewriteError::NotDecreasing { rule: 0, .. }));
        let e = sys(&["x", "y"], &[("x", "x*x")]).unwrap_err();
        assert!(matches!(e, RewriteError::NotDecreasing { .. }));
        let e = sys(&["x", "y"], &[("y*x", "x*y"), ("y*x", "1")]).unwrap_err();
        assert_eq!(e, RewriteError::DuplicateLhs(0, 1));
    }

    #[test]
    fn reduce_fixpoint_and_single_step() {
        let s = sys(&["x", "y"], &[("y*x", "2*x*y + 1")]).unwrap();
        let a = s.alphabet().clone();
        let f = parse_poly("x*y - 3", &SymbolTable::new(&a)).unwrap();
        assert_eq!(s.reduce(&f), (f.clone(), 0));
        let lhs = NcPoly::word(s.rules()[0].lhs.clone());
        assert_eq!(s.reduce(&lhs), (s.rules()[0].rhs.clone(), 1));
    }

    #[test]
    fn quantum_plane_normal_form() {
        // y x -> 2 x y: y y x -> 4 x y y
        let s = sys(&["x", "y"], &[("y*x", "2*x*y")]).unwrap();
        let a = s.alphabet().clone();
        let f = parse_poly("y*y*x", &SymbolTable::new(&a)).unwrap();
        let red = s.reduce_traced(&f);
        assert_eq!(red.normal_form, parse_poly("4*x*y*y", &SymbolTable::new(&a)).unwrap());
        assert_eq!(red.steps, 2);
        assert_eq!(red.trace[0].position, 1);
    }

    #[test]
    fn random_strategy_agrees_on_confluent_system() {
        let s = sys(&["x", "y"], &[("y*x", "2*x*y + 1")]).unwrap();
        let a = s.alphabet().clone();
        let f = parse_poly("y*y*x*x + y*x*y - 3*x", &SymbolTable::new(&a)).unwrap();
        let nf = s.reduce(&f).0;
        let mut k = 0usize;
        let other = s.reduce_by(&f, |n| {
            k = k.wrapping_mul(31).wrapping_add(7);
            k % n
        });
        assert_eq!(nf, other);
        assert!(nf.terms().all(|(w, _)| s.is_irreducible(w)));
    }
}
