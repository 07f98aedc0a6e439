//! Counting and listing irreducible words with an Aho-Corasick automaton
//! over the leading words.

use super::RewriteSystem;
use crate::freealg::Word;
use std::collections::VecDeque;

/// Deterministic automaton that tracks the longest suffix that is a prefix
/// of some leading word; dead states have a leading word as a suffix.
#[derive(Debug, Clone)]
pub struct FactorAutomaton {
    letters: usize,
    delta: Vec<Vec<usize>>,
    dead: Vec<bool>,
}

impl FactorAutomaton {
    pub fn new(s: &RewriteSystem) -> FactorAutomaton {
        let letters = s.alphabet().len();
        let mut children: Vec<Vec<Option<usize>>> = vec![vec![None; letters]];
        let mut dead = vec![false];
        for rule in s.rules() {
            let mut st = 0;
            for &x in rule.lhs.letters() {
                st = match children[st][x as usize] {
                    Some(next) => next,
                    None => {
                        children.push(vec![None; letters]);
                        dead.push(false);
                        let next = children.len() - 1;
                        children[st][x as usize] = Some(next);
                        next
                    }
                };
            }
            dead[st] = true;
        }
        let n = children.len();
        let mut delta = vec![vec![0usize; letters]; n];
        let mut fail = vec![0usize; n];
        let mut queue = VecDeque::new();
        for x in 0..letters {
            if let Some(c) = children[0][x] {
                delta[0][x] = c;
                queue.push_back(c);
            }
        }
        while let Some(st) = queue.pop_front() {
            dead[st] = dead[st] || dead[fail[st]];
            for x in 0..letters {
                match children[st][x] {
                    Some(c) => {
                        fail[c] = delta[fail[st]][x];
                        delta[st][x] = c;
                        queue.push_back(c);
                    }
                    None => delta[st][x] = delta[fail[st]][x],
                }
            }
        }
        FactorAutomaton { letters, delta, dead }
    }

    /// Number of irreducible words of each length `0..=d`.
    pub fn count(&self, d: usize) -> Vec<u128> {
        let mut counts = Vec::with_capacity(d + 1);
        let mut dp = vec![0u128; self.delta.len()];
        dp[0] = 1;
        counts.push(1);
        for _ in 0..d {
            let mut next = vec![0u128; self.delta.len()];
            for (st, &ways) in dp.iter().enumerate() {
                if ways == 0 {
                    continue;
                }
                for x in 0..self.letters {
                    let t = self.delta[st][x];
                    if !self.dead[t] {
                        next[t] = next[t].checked_add(ways).expect("irreducible word count overflow");
                    }
                }
            }
            counts.push(next.iter().sum());
            dp = next;
        }
        counts
    }

    /// Irreducible words of length at most `d` in increasing deglex order.
    pub fn enumerate(&self, d: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![(Word::empty(), 0usize)];
        for _ in 0..d {
            let mut next = Vec::new();
            for (w, st) in &layer {
                for x in 0..self.letters {
                    let t = self.delta[*st][x];
                    if !self.dead[t] {
                        next.push((w.concat(&Word::letter(x as u32)), t));
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| w.clone()));
            layer = next;
        }
        out
    }
}

/// Irreducible word counts per degree `0..=d`.
pub fn count_irreducible(s: &RewriteSystem, d: usize) -> Vec<u128> {
    FactorAutomaton::new(s).count(d)
}

pub fn enumerate_irreducible(s: &RewriteSystem, d: usize) -> Vec<Word> {
    FactorAutomaton::new(s).enumerate(d)
}
