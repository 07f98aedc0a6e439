//! Membership in `P (x) Q` without enumerating the tensor's word space.
//!
//! A query is first sorted modulo the commutators (every `P`-letter moved in
//! front of every `Q`-letter), giving a combination of pairs `p q`. With
//! `N_P`, `N_Q` the bounded normal-form projections of the factors,
//! `p q = (p - N_P p) q + N_P(p) (q - N_Q q) + N_P(p) N_Q(q)`, and the query
//! is certified when the last part cancels.

use super::ideal::IdealEngine;
use super::{flat_membership_batch, words_up_to, FpError, Limits, MembershipVerdict, Presentation, Witness};
use crate::freealg::{NcPoly, Word};
use crate::scalars::Scalar;
use rayon::prelude::*;
use std::collections::BTreeMap;

type WitnessMap = BTreeMap<(Word, usize, Word), Scalar>;

fn bump(map: &mut WitnessMap, key: (Word, usize, Word), c: &Scalar) {
    let v = &map.get(&key).cloned().unwrap_or_else(Scalar::zero) + c;
    map.insert(key, v);
}

/// A query rewritten as `sum c (p, q)` plus the commutator terms used.
struct Sorted {
    pairs: BTreeMap<(Word, Word), Scalar>,
    witness: WitnessMap,
    degree: usize,
}

impl Sorted {
    fn max_degrees(&self) -> (usize, usize) {
        let p = self.pairs.keys().map(|(p, _)| p.len()).max().unwrap_or(0);
        let q = self.pairs.keys().map(|(_, q)| q.len()).max().unwrap_or(0);
        (p, q)
    }
}

fn sort_modulo_commutators(t: &Presentation, f: &NcPoly) -> Sorted {
    let np = t.factors().expect("tensor").0.alphabet().len() as u32;
    let mut pairs: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
    let mut witness = WitnessMap::new();
    for (w, c) in f.terms() {
        let mut letters = w.letters().to_vec();
        // bubble the first out-of-order pair: u y x v = u x y v - u (x y - y x) v
        while let Some(i) = (0..letters.len().saturating_sub(1)).find(|&i| letters[i] >= np && letters[i + 1] < np) {
            let (y, x) = (letters[i], letters[i + 1]);
            let key = (Word::from_letters(&letters[..i]), t.commutator_index(x, y), Word::from_letters(&letters[i + 2..]));
            bump(&mut witness, key, &-c);
            letters.swap(i, i + 1);
        }
        let split = letters.iter().position(|&x| x >= np).unwrap_or(letters.len());
        let p = Word::from_letters(&letters[..split]);
        let q = Word::from_letters(&letters[split..].iter().map(|&y| y - np).collect::<Vec<_>>());
        let v = &pairs.get(&(p.clone(), q.clone())).cloned().unwrap_or_else(Scalar::zero) + c;
        if v.is_zero() {
            pairs.remove(&(p, q));
        } else {
            pairs.insert((p, q), v);
        }
    }
    Sorted { pairs, witness, degree: f.degree().unwrap_or(0) }
}

/// The box test at total bound `t`; `None` when the projected remainder survives.
fn box_witness(
    tensor: &Presentation,
    ep: &IdealEngine<'_>,
    eq: &IdealEngine<'_>,
    s: &Sorted,
    t: usize,
) -> Option<Witness> {
    let (maxp, maxq) = s.max_degrees();
    if maxp + maxq > t {
        return None;
    }
    let (a, b) = (t - maxq, t - maxp);
    let np = ep.presentation().alphabet().len() as u32;
    let offset = ep.presentation().relations().len();
    let mut proj_p = BTreeMap::new();
    let mut proj_q = BTreeMap::new();
    for (p, q) in s.pairs.keys() {
        proj_p.entry(p.clone()).or_insert_with(|| ep.reduce_at(&NcPoly::word(p.clone()), a));
        proj_q.entry(q.clone()).or_insert_with(|| eq.reduce_at(&NcPoly::word(q.clone()), b));
    }
    let mut remainder: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
    for ((p, q), c) in &s.pairs {
        let (np_, _) = &proj_p[p];
        let (nq_, _) = &proj_q[q];
        for (wp, cp) in np_.terms() {
            for (wq, cq) in nq_.terms() {
                let key = (wp.clone(), wq.clone());
                let v = &remainder.get(&key).cloned().unwrap_or_else(Scalar::zero) + &(&(c * cp) * cq);
                remainder.insert(key, v);
            }
        }
    }
    if remainder.values().any(|v| !v.is_zero()) {
        return None;
    }
    let shift = |w: &Word| Word::from_letters(&w.letters().iter().map(|&y| y + np).collect::<Vec<_>>());
    let mut map = s.witness.clone();
    for ((p, q), c) in &s.pairs {
        let (np_, used_p) = &proj_p[p];
        let (_, used_q) = &proj_q[q];
        // (p - N p) q
        ep.add_witness_terms(&mut map, used_p, &Word::empty(), &shift(q), c, |x| x, |r| r);
        // N(p) (q - N q)
        for (wp, cp) in np_.terms() {
            eq.add_witness_terms(&mut map, used_q, wp, &Word::empty(), &(c * cp), |y| y + np, |r| r + offset);
        }
    }
    let witness = Witness::from_map(map);
    debug_assert!(witness.degree(tensor) <= t);
    Some(witness)
}

pub(super) fn membership_batch(
    t: &Presentation,
    fs: &[NcPoly],
    d: usize,
    limits: Limits,
) -> Result<Vec<MembershipVerdict>, FpError> {
    let (p, q) = t.factors().expect("tensor");
    let sorted: Vec<Sorted> = fs.par_iter().map(|f| sort_modulo_commutators(t, f)).collect();
    let mut ep = IdealEngine::new(p, true, limits);
    let mut eq = IdealEngine::new(q, true, limits);
    let need_a = sorted.iter().filter(|s| !s.pairs.is_empty()).map(|s| d.saturating_sub(s.max_degrees().1)).max();
    let need_b = sorted.iter().filter(|s| !s.pairs.is_empty()).map(|s| d.saturating_sub(s.max_degrees().0)).max();
    if let (Some(a), Some(b)) = (need_a, need_b) {
        ep.extend_to(a)?;
        eq.extend_to(b)?;
    }
    let mut verdicts: Vec<Option<MembershipVerdict>> = sorted
        .par_iter()
        .map(|s| {
            if s.pairs.is_empty() {
                return Some(MembershipVerdict::CertifiedMember { bound: s.degree, witness: Witness::from_map(s.witness.clone()) });
            }
            let (maxp, maxq) = s.max_degrees();
            (s.degree.max(maxp + maxq)..=d)
                .find_map(|bound| box_witness(t, &ep, &eq, s, bound).map(|witness| (bound, witness)))
                .map(|(bound, witness)| MembershipVerdict::CertifiedMember { bound, witness })
        })
        .collect();
    let open: Vec<usize> = (0..fs.len()).filter(|&k| verdicts[k].is_none()).collect();
    if !open.is_empty() && words_up_to(t.alphabet().len(), d) <= limits.max_words as u128 {
        let queries: Vec<NcPoly> = open.iter().map(|&k| fs[k].clone()).collect();
        for (k, v) in open.into_iter().zip(flat_membership_batch(t, &queries, d, limits)?) {
            verdicts[k] = Some(v);
        }
    }
    Ok(verdicts.into_iter().map(|v| v.unwrap_or(MembershipVerdict::UnknownAtBound(d))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpalg::{quotient_dim_bounded, tensor_presentation};
    use crate::freealg::{parse_poly, Alphabet, SymbolTable};

    fn pres(letters: &[&str], rels: &[&str]) -> Presentation {
        let a = Alphabet::new(letters.iter().copied()).unwrap();
        let rels = rels.iter().map(|r| parse_poly(r, &SymbolTable::new(&a)).unwrap()).collect();
        Presentation::new("P", a, rels).unwrap()
    }

    #[test]
    fn box_and_flat_agree() {
        let p = pres(&["x", "y"], &["x*y - 1"]);
        let q = pres(&["u", "v"], &["v*u - 2*u*v"]);
        let t = tensor_presentation(&p, &q);
        let syms = SymbolTable::new(t.alphabet());
        let queries: Vec<NcPoly> = ["u*x*y - u", "v*u*x - 2*x*u*v", "u*x - x*u", "y*x - 1", "x*u*y*v - v*u*u*v"]
            .iter()
            .map(|s| parse_poly(s, &syms).unwrap())
            .collect();
        let boxed = membership_batch(&t, &queries, 3, Limits::default()).unwrap();
        let flat = flat_membership_batch(&t, &queries, 3, Limits::default()).unwrap();
        for ((f, b), fl) in queries.iter().zip(&boxed).zip(&flat) {
            assert_eq!(b.is_member(), fl.is_member(), "{}", f.display(t.alphabet()));
            if let MembershipVerdict::CertifiedMember { witness, bound } = b {
                assert_eq!(&witness.evaluate(&t), f);
                assert!(witness.degree(&t) <= *bound);
            }
        }
        assert_eq!(boxed.iter().filter(|v| v.is_member()).count(), 3);
    }

    #[test]
    fn tensor_dimensions_convolve() {
        let p = pres(&["x", "y"], &["x*y - 1"]);
        let q = pres(&["u", "v"], &["v*u - 2*u*v"]);
        let t = tensor_presentation(&p, &q);
        let dp = quotient_dim_bounded(&p, 2).unwrap();
        let dq = quotient_dim_bounded(&q, 2).unwrap();
        let graded = |d: &[u128], k: usize| if k == 0 { d[0] } else { d[k] - d[k - 1] };
        let conv: u128 = (0..=2).flat_map(|a| (0..=2 - a).map(move |b| (a, b))).map(|(a, b)| graded(&dp, a) * graded(&dq, b)).sum();
        assert_eq!(quotient_dim_bounded(&t, 2).unwrap()[2], conv);
    }
}
