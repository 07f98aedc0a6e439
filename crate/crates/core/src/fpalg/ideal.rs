//! Incremental echelon form of the span of relation products `u r v`.

use super::{FpError, Presentation, Witness};
use crate::freealg::{NcPoly, Word};
use crate::scalars::Scalar;
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of words of length at most the bound.
    pub max_words: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_words: 60_000 }
    }
}

/// Number of words of length at most `d` over `n` letters.
pub fn words_up_to(n: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=d {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(n as u128);
    }
    total
}

pub(crate) fn words_of_len(n: usize, k: usize) -> Vec<Word> {
    let mut layer = vec![Word::empty()];
    for _ in 0..k {
        layer = layer.iter().flat_map(|w| (0..n as u32).map(move |x| w.concat(&Word::letter(x)))).collect();
    }
    layer
}

/// The product `left * relations[relation] * right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub left: Word,
    pub relation: usize,
    pub right: Word,
}

type History = BTreeMap<usize, Scalar>;

#[derive(Debug, Clone)]
struct Row {
    poly: NcPoly,
    history: History,
    created: usize,
}

fn axpy(target: &mut History, c: &Scalar, source: &History) {
    for (g, a) in source {
        let v = &target.get(g).cloned().unwrap_or_else(Scalar::zero) + &(c * a);
        if v.is_zero() {
            target.remove(g);
        } else {
            target.insert(*g, v);
        }
    }
}

/// Rows are monic with pairwise distinct leading words; each remembers the
/// bound it was created at, so the echelon at any smaller bound is a prefix.
pub struct IdealEngine<'a> {
    pres: &'a Presentation,
    track: bool,
    limits: Limits,
    built: Option<usize>,
    generators: Vec<Generator>,
    rows: Vec<Row>,
    pivots: HashMap<Word, usize>,
}

impl<'a> IdealEngine<'a> {
    /// With `track`, rows carry their combination of generators for witnesses.
    pub fn new(pres: &'a Presentation, track: bool, limits: Limits) -> IdealEngine<'a> {
        IdealEngine { pres, track, limits, built: None, generators: Vec::new(), rows: Vec::new(), pivots: HashMap::new() }
    }

    pub fn presentation(&self) -> &'a Presentation {
        self.pres
    }

    pub fn built_bound(&self) -> Option<usize> {
        self.built
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Adds every generator of total degree at most `d`.
    pub fn extend_to(&mut self, d: usize) -> Result<(), FpError> {
        if self.built.is_some_and(|b| b >= d) {
            return Ok(());
        }
        let n = self.pres.alphabet().len();
        let words = words_up_to(n, d);
        if words > self.limits.max_words as u128 {
            return Err(FpError::ResourceCap { words, degree: d, cap: self.limits.max_words });
        }
        let start = self.built.map_or(0, |b| b + 1);
        let mut by_len: Vec<Vec<Word>> = Vec::new();
        for bound in start..=d {
            for (r, rel) in self.pres.relations().iter().enumerate() {
                let deg = rel.degree().unwrap_or(0);
                if deg > bound {
                    continue;
                }
                let rest = bound - deg;
                while by_len.len() <= rest {
                    by_len.push(words_of_len(n, by_len.len()));
                }
                for a in 0..=rest {
                    for u in &by_len[a] {
                        for v in &by_len[rest - a] {
                            self.insert(Generator { left: u.clone(), relation: r, right: v.clone() }, bound);
                        }
                    }
                }
            }
            self.built = Some(bound);
        }
        Ok(())
    }

    fn insert(&mut self, g: Generator, bound: usize) {
        let mut poly = NcPoly::zero();
        poly.add_scaled_product(&Scalar::one(), &g.left, &self.pres.relations()[g.relation], &g.right);
        let id = self.generators.len();
        self.generators.push(g);
        let mut history = History::new();
        if self.track {
            history.insert(id, Scalar::one());
        }
        loop {
            let Some((lead, c)) = poly.leading_term().ok().map(|(w, c)| (w.clone(), c.clone())) else {
                return;
            };
            match self.pivots.get(&lead) {
                Some(&k) => {
                    let row = &self.rows[k];
                    poly = &poly - &row.poly.scale(&c);
                    if self.track {
                        axpy(&mut history, &-&c, &row.history);
                    }
                }
                None => {
                    let inv = c.inv().expect("nonzero leading coefficient");
                    let poly = poly.scale(&inv);
                    let history = history.into_iter().map(|(g, a)| (g, &a * &inv)).collect();
                    self.pivots.insert(lead, self.rows.len());
                    self.rows.push(Row { poly, history, created: bound });
                    return;
                }
            }
        }
    }

    /// Dimension of the span of generators of total degree at most `d`.
    pub fn rank_at(&self, d: usize) -> usize {
        self.rows.iter().filter(|r| r.created <= d).count()
    }

    /// Full reduction by the echelon at bound `d`: returns the remainder and
    /// the generator combination subtracted from `f`.
    pub fn reduce_at(&self, f: &NcPoly, d: usize) -> (NcPoly, BTreeMap<usize, Scalar>) {
        let mut poly = f.clone();
        let mut used = History::new();
        let mut cursor: Option<Word> = None;
        while let Some(w) = poly.largest_word_below(cursor.as_ref()).cloned() {
            if let Some(row) = self.pivots.get(&w).map(|&k| &self.rows[k]).filter(|r| r.created <= d) {
                let c = poly.coeff(&w);
                poly = &poly - &row.poly.scale(&c);
                if self.track {
                    axpy(&mut used, &c, &row.history);
                }
            }
            cursor = Some(w);
        }
        (poly, used)
    }

    /// A witness for `f` at bound `d` when `f` lies in the bounded span.
    pub fn witness_at(&self, f: &NcPoly, d: usize) -> Option<Witness> {
        assert!(self.track, "witnesses need a tracking engine");
        let (rem, used) = self.reduce_at(f, d);
        rem.is_zero().then(|| self.witness_from(&used, &Word::empty(), &Word::empty(), &Scalar::one(), |r| r))
    }

    /// `scale * prefix * (sum used) * suffix` as witness terms, with relation
    /// indices mapped through `relation`.
    pub(crate) fn witness_from(
        &self,
        used: &BTreeMap<usize, Scalar>,
        prefix: &Word,
        suffix: &Word,
        scale: &Scalar,
        relation: impl Fn(usize) -> usize,
    ) -> Witness {
        let mut map = BTreeMap::new();
        self.add_witness_terms(&mut map, used, prefix, suffix, scale, |x| x, relation);
        Witness::from_map(map)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn add_witness_terms(
        &self,
        map: &mut BTreeMap<(Word, usize, Word), Scalar>,
        used: &BTreeMap<usize, Scalar>,
        prefix: &Word,
        suffix: &Word,
        scale: &Scalar,
        letter: impl Fn(u32) -> u32,
        relation: impl Fn(usize) -> usize,
    ) {
        let shift = |w: &Word| Word::from_letters(&w.letters().iter().map(|&x| letter(x)).collect::<Vec<_>>());
        for (g, a) in used {
            let gen = &self.generators[*g];
            let key = (prefix.concat(&shift(&gen.left)), relation(gen.relation), shift(&gen.right).concat(suffix));
            let v = &map.get(&key).cloned().unwrap_or_else(Scalar::zero) + &(scale * a);
            map.insert(key, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{parse_poly, Alphabet, SymbolTable};
    use crate::fpalg::quotient_dim_bounded;

    /// Rank of the dense matrix of all `u r v` of total degree at most `d`,
    /// computed independently of the incremental echelon.
    fn dense_quotient_dims(p: &Presentation, d: usize) -> Vec<u128> {
        let n = p.alphabet().len();
        let words: Vec<Word> = (0..=d).flat_map(|k| words_of_len(n, k)).collect();
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
        (0..=d)
            .map(|bound| {
                let mut rows: Vec<Vec<Scalar>> = Vec::new();
                for rel in p.relations() {
                    let deg = rel.degree().unwrap();
                    if deg > bound {
                        continue;
                    }
                    for a in 0..=bound - deg {
                        for b in 0..=bound - deg - a {
                            for u in words_of_len(n, a) {
                                for v in words_of_len(n, b) {
                                    let mut row = vec![Scalar::zero(); words.len()];
                                    for (w, c) in rel.terms() {
                                        row[index[&u.concat(w).concat(&v)]] = c.clone();
                                    }
                                    rows.push(row);
                                }
                            }
                        }
                    }
                }
                let rank = dense_rank(rows);
                words_up_to(n, bound) - rank as u128
            })
            .collect()
    }

    fn dense_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
        let cols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
            rows.swap(rank, piv);
            let inv = rows[rank][col].inv().unwrap();
            for r in rank + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = &rows[r][col] * &inv;
                for j in col..cols {
                    let d = &f * &rows[rank][j];
                    rows[r][j] -= &d;
                }
            }
            rank += 1;
        }
        rank
    }

    fn pres(letters: &[&str], rels: &[&str]) -> Presentation {
        let a = Alphabet::new(letters.iter().copied()).unwrap();
        let rels = rels.iter().map(|r| parse_poly(r, &SymbolTable::new(&a)).unwrap()).collect();
        Presentation::new("P", a, rels).unwrap()
    }

    #[test]
    fn xy_minus_one_matches_dense_oracle() {
        let p = pres(&["x", "y"], &["x*y - 1"]);
        assert_eq!(dense_quotient_dims(&p, 2), vec![1, 3, 6]);
        assert_eq!(quotient_dim_bounded(&p, 4).unwrap(), dense_quotient_dims(&p, 4));
    }

    #[test]
    fn mixed_degree_relations_match_dense_oracle() {
        let p = pres(&["x", "y", "z"], &["y*x - 2*x*y + z", "z*z - x", "x*y*z - 1"]);
        assert_eq!(quotient_dim_bounded(&p, 4).unwrap(), dense_quotient_dims(&p, 4));
    }

    #[test]
    fn words_counting() {
        assert_eq!(words_up_to(4, 2), 21);
        assert_eq!(words_up_to(0, 3), 1);
        assert_eq!(words_of_len(3, 2).len(), 9);
    }
}
