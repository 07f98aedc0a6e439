//! Finitely presented algebras: an alphabet plus relations `r = 0`.
//!
//! Ideal questions are answered by exact linear algebra on the span of all
//! products `u r v` up to a total degree bound. Answers are one-sided: a
//! positive answer comes with a witness that rebuilds the query exactly, a
//! negative one only means "not at this bound".

mod ideal;
mod tensor;

pub use ideal::{words_up_to, Generator, IdealEngine, Limits};

use crate::freealg::{Alphabet, FreeAlgError, NcPoly, Word};
use crate::scalars::Scalar;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("resource cap exceeded: {words} words up to degree {degree} (cap {cap})")]
    ResourceCap { words: u128, degree: usize, cap: usize },
    #[error("query of degree {degree} exceeds the bound {bound}")]
    DegreeAboveBound { degree: usize, bound: usize },
    #[error("morphism needs {expected} letter images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("relation {0} is zero")]
    ZeroRelation(usize),
    #[error(transparent)]
    Alphabet(#[from] FreeAlgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    alphabet: Alphabet,
    relations: Vec<NcPoly>,
    factors: Option<Arc<(Presentation, Presentation)>>,
}

impl Presentation {
    pub fn new(name: impl Into<String>, alphabet: Alphabet, relations: Vec<NcPoly>) -> Result<Presentation, FpError> {
        for (k, r) in relations.iter().enumerate() {
            if r.is_zero() {
                return Err(FpError::ZeroRelation(k));
            }
            alphabet.check_poly(r)?;
        }
        Ok(Presentation { name: name.into(), alphabet, relations, factors: None })
    }

    /// The ground field: no letters, no relations.
    pub fn ground_field() -> Presentation {
        Presentation { name: "k".into(), alphabet: Alphabet::empty(), relations: Vec::new(), factors: None }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Presentation {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relations(&self) -> &[NcPoly] {
        &self.relations
    }

    /// The two factors when built by [`tensor_presentation`].
    pub fn factors(&self) -> Option<&(Presentation, Presentation)> {
        self.factors.as_deref()
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations.iter().filter_map(NcPoly::degree).max().unwrap_or(0)
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.display(&self.alphabet).to_string()).collect()
    }

    /// Index of the commutator `x y - y x` in a tensor presentation.
    fn commutator_index(&self, x: u32, y: u32) -> usize {
        let (p, q) = self.factors().expect("tensor presentation");
        let np = p.alphabet.len();
        p.relations.len() + q.relations.len() + x as usize * q.alphabet.len() + (y as usize - np)
    }
}

/// `P (x) Q`: letters of `P` then letters of `Q`; relations of `P`, of `Q`
/// (letters shifted), then `x y - y x` for every `P`-letter `x` and `Q`-letter `y`.
pub fn tensor_presentation(p: &Presentation, q: &Presentation) -> Presentation {
    let np = p.alphabet.len() as u32;
    let alphabet = p.alphabet.disjoint_union(&q.alphabet);
    let mut relations = p.relations.clone();
    relations.extend(q.relations.iter().map(|r| r.map_letters(|y| y + np)));
    for x in 0..np {
        for y in 0..q.alphabet.len() as u32 {
            let xy = NcPoly::word(Word::from_letters(&[x, y + np]));
            let yx = NcPoly::word(Word::from_letters(&[y + np, x]));
            relations.push(&xy - &yx);
        }
    }
    Presentation {
        name: format!("{} ⊗ {}", p.name, q.name),
        alphabet,
        relations,
        factors: Some(Arc::new((p.clone(), q.clone()))),
    }
}

/// Same alphabet, every relation read right to left.
pub fn opposite_presentation(p: &Presentation) -> Presentation {
    let name = match p.name.strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{}^op", p.name),
    };
    Presentation { name, alphabet: p.alphabet.clone(), relations: p.relations.iter().map(NcPoly::reversed).collect(), factors: None }
}

/// `coeff * left * relation * right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTerm {
    pub left: Word,
    pub relation: usize,
    pub right: Word,
    pub coeff: Scalar,
}

/// A combination of relation products, merged by `(left, relation, right)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness(Vec<WitnessTerm>);

impl Witness {
    fn from_map(map: BTreeMap<(Word, usize, Word), Scalar>) -> Witness {
        Witness(
            map.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((left, relation, right), coeff)| WitnessTerm { left, relation, right, coeff })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[WitnessTerm] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum coeff * left * relation * right` in the free algebra.
    pub fn evaluate(&self, p: &Presentation) -> NcPoly {
        let mut out = NcPoly::zero();
        for t in &self.0 {
            out.add_scaled_product(&t.coeff, &t.left, &p.relations[t.relation], &t.right);
        }
        out
    }

    /// Largest total degree among the terms.
    pub fn degree(&self, p: &Presentation) -> usize {
        self.0
            .iter()
            .map(|t| t.left.len() + t.right.len() + p.relations[t.relation].degree().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipVerdict {
    /// Member, with the smallest bound that worked.
    CertifiedMember { bound: usize, witness: Witness },
    /// Not shown to be a member at this bound; not a proof of non-membership.
    UnknownAtBound(usize),
}

impl MembershipVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipVerdict::CertifiedMember { .. })
    }
}

/// Cumulative quotient dimensions `dim V<=k / I<=k` for `k = 0..=d`.
///
/// Upper bounds on the true filtration dimensions.
pub fn quotient_dim_bounded(p: &Presentation, d: usize) -> Result<Vec<u128>, FpError> {
    quotient_dim_bounded_with(p, d, Limits::default())
}

pub fn quotient_dim_bounded_with(p: &Presentation, d: usize, limits: Limits) -> Result<Vec<u128>, FpError> {
    let mut engine = IdealEngine::new(p, false, limits);
    engine.extend_to(d)?;
    let n = p.alphabet.len();
    Ok((0..=d).map(|k| words_up_to(n, k) - engine.rank_at(k) as u128).collect())
}

pub fn ideal_membership_bounded(p: &Presentation, f: &NcPoly, d: usize) -> Result<MembershipVerdict, FpError> {
    Ok(membership_batch(p, std::slice::from_ref(f), d, Limits::default())?.pop().expect("one verdict"))
}

/// Membership for several queries at once, sharing the elimination work.
pub fn membership_batch(
    p: &Presentation,
    fs: &[NcPoly],
    d: usize,
    limits: Limits,
) -> Result<Vec<MembershipVerdict>, FpError> {
    for f in fs {
        p.alphabet.check_poly(f)?;
        let degree = f.degree().unwrap_or(0);
        if degree > d {
            return Err(FpError::DegreeAboveBound { degree, bound: d });
        }
    }
    if p.factors().is_some() {
        return tensor::membership_batch(p, fs, d, limits);
    }
    flat_membership_batch(p, fs, d, limits)
}

pub(crate) fn flat_membership_batch(
    p: &Presentation,
    fs: &[NcPoly],
    d: usize,
    limits: Limits,
) -> Result<Vec<MembershipVerdict>, FpError> {
    let mut verdicts: Vec<Option<MembershipVerdict>> = fs
        .iter()
        .map(|f| f.is_zero().then(|| MembershipVerdict::CertifiedMember { bound: 0, witness: Witness::default() }))
        .collect();
    let start = fs.iter().filter_map(NcPoly::degree).min().unwrap_or(0);
    let mut engine = IdealEngine::new(p, true, limits);
    for bound in start..=d {
        let pending: Vec<usize> = (0..fs.len())
            .filter(|&k| verdicts[k].is_none() && fs[k].degree().unwrap_or(0) <= bound)
            .collect();
        if pending.is_empty() {
            if verdicts.iter().all(Option::is_some) {
                break;
            }
            continue;
        }
        engine.extend_to(bound)?;
        let found: Vec<(usize, Option<Witness>)> =
            pending.par_iter().map(|&k| (k, engine.witness_at(&fs[k], bound))).collect();
        for (k, w) in found {
            if let Some(witness) = w {
                verdicts[k] = Some(MembershipVerdict::CertifiedMember { bound, witness });
            }
        }
    }
    Ok(verdicts.into_iter().map(|v| v.unwrap_or(MembershipVerdict::UnknownAtBound(d))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Variance {
    Morphism,
    AntiMorphism,
}

/// An assignment of target elements to source letters.
#[derive(Debug, Clone)]
pub struct MorphismSpec {
    pub name: String,
    pub source: Presentation,
    pub target: Presentation,
    pub images: Vec<NcPoly>,
    pub variance: Variance,
}

impl MorphismSpec {
    pub fn new(
        name: impl Into<String>,
        source: Presentation,
        target: Presentation,
        images: Vec<NcPoly>,
        variance: Variance,
    ) -> Result<MorphismSpec, FpError> {
        if images.len() != source.alphabet.len() {
            return Err(FpError::ImageCount { expected: source.alphabet.len(), got: images.len() });
        }
        for im in &images {
            target.alphabet.check_poly(im)?;
        }
        Ok(MorphismSpec { name: name.into(), source, target, images, variance })
    }

    /// Image of a source element (words reversed for anti-morphisms).
    pub fn apply(&self, f: &NcPoly) -> NcPoly {
        f.substitute(&self.images, self.variance == Variance::AntiMorphism)
    }
}

#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub relation: usize,
    pub image: NcPoly,
    pub verdict: MembershipVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismVerdict {
    Certified,
    UnknownAtBound(usize),
}

#[derive(Debug, Clone)]
pub struct MorphismCertificate {
    pub name: String,
    pub bound: usize,
    pub checks: Vec<RelationCheck>,
}

impl MorphismCertificate {
    pub fn verdict(&self) -> MorphismVerdict {
        if self.checks.iter().all(|c| c.verdict.is_member()) {
            MorphismVerdict::Certified
        } else {
            MorphismVerdict::UnknownAtBound(self.bound)
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict() == MorphismVerdict::Certified
    }

    pub fn unknown(&self) -> usize {
        self.checks.iter().filter(|c| !c.verdict.is_member()).count()
    }

    /// Largest bound any relation needed.
    pub fn bound_used(&self) -> usize {
        self.checks
            .iter()
            .filter_map(|c| match c.verdict {
                MembershipVerdict::CertifiedMember { bound, .. } => Some(bound),
                MembershipVerdict::UnknownAtBound(_) => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Checks that every source relation maps into the target ideal.
pub fn certify_morphism(m: &MorphismSpec, bound: usize) -> Result<MorphismCertificate, FpError> {
    certify_morphism_with(m, bound, Limits::default())
}

pub fn certify_morphism_with(m: &MorphismSpec, bound: usize, limits: Limits) -> Result<MorphismCertificate, FpError> {
    let images: Vec<NcPoly> = m.source.relations.par_iter().map(|r| m.apply(r)).collect();
    let verdicts = membership_batch(&m.target, &images, bound, limits)?;
    let checks = images
        .into_iter()
        .zip(verdicts)
        .enumerate()
        .map(|(relation, (image, verdict))| RelationCheck { relation, image, verdict })
        .collect();
    Ok(MorphismCertificate { name: m.name.clone(), bound, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{parse_poly, SymbolTable};

    fn pres(letters: &[&str], rels: &[&str]) -> Presentation {
        let a = Alphabet::new(letters.iter().copied()).unwrap();
        let syms = SymbolTable::new(&a);
        let rels = rels.iter().map(|r| parse_poly(r, &syms).unwrap()).collect();
        Presentation::new("P", a.clone(), rels).unwrap()
    }

    #[test]
    fn free_algebra_dimensions() {
        let p = pres(&["a", "b", "c", "d"], &[]);
        assert_eq!(quotient_dim_bounded(&p, 2).unwrap(), vec![1, 5, 21]);
    }

    #[test]
    fn relation_is_trivial_member() {
        let p = pres(&["x", "y"], &["x*y - 1", "y*y*x - x"]);
        for (k, r) in p.relations().iter().enumerate() {
            match ideal_membership_bounded(&p, r, 3).unwrap() {
                MembershipVerdict::CertifiedMember { witness, .. } => {
                    assert_eq!(witness.evaluate(&p), *r);
                    assert_eq!(witness.terms()[0].relation, k);
                }
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn consequences_need_higher_bound() {
        // x y = 1 gives x x y y - 1 = x (x y - 1) y + (x y - 1)
        let p = pres(&["x", "y"], &["x*y - 1"]);
        let f = parse_poly("x*x*y*y - 1", &SymbolTable::new(p.alphabet())).unwrap();
        match ideal_membership_bounded(&p, &f, 4).unwrap() {
            MembershipVerdict::CertifiedMember { bound, witness } => {
                assert_eq!(bound, 4);
                assert_eq!(witness.evaluate(&p), f);
                assert!(witness.degree(&p) <= 4);
            }
            v => panic!("{v:?}"),
        }
        let g = parse_poly("y*x - 1", &SymbolTable::new(p.alphabet())).unwrap();
        assert_eq!(ideal_membership_bounded(&p, &g, 4).unwrap(), MembershipVerdict::UnknownAtBound(4));
        assert!(matches!(ideal_membership_bounded(&p, &f, 3), Err(FpError::DegreeAboveBound { degree: 4, bound: 3 })));
    }

    #[test]
    fn resource_cap_is_reported() {
        let p = pres(&["a", "b", "c"], &["a*b"]);
        let e = quotient_dim_bounded_with(&p, 5, Limits { max_words: 100 }).unwrap_err();
        assert!(matches!(e, FpError::ResourceCap { cap: 100, .. }));
    }

    #[test]
    fn tensor_shape() {
        let p = pres(&["x"], &[]);
        let q = pres(&["y"], &[]);
        let t = tensor_presentation(&p, &q);
        assert_eq!(t.alphabet().names(), &["x", "y"]);
        assert_eq!(t.relation_strings(), vec!["-y*x + x*y"]);
    }

    #[test]
    fn opposite_reverses_and_is_involutive() {
        let p = pres(&["x", "y"], &["x*y - 1"]);
        let op = opposite_presentation(&p);
        assert_eq!(op.relation_strings(), vec!["y*x - 1"]);
        assert_eq!(opposite_presentation(&op), p);
    }

    #[test]
    fn identity_and_anti_morphisms() {
        let p = pres(&["x", "y"], &["x*y - 1", "y*y - x"]);
        let id = MorphismSpec::new("id", p.clone(), p.clone(), vec![NcPoly::letter(0), NcPoly::letter(1)], Variance::Morphism)
            .unwrap();
        assert!(certify_morphism(&id, 2).unwrap().is_certified());
        let op = opposite_presentation(&p);
        let anti =
            MorphismSpec::new("rev", p.clone(), op, vec![NcPoly::letter(0), NcPoly::letter(1)], Variance::AntiMorphism)
                .unwrap();
        assert!(certify_morphism(&anti, 2).unwrap().is_certified());
        // swapping the letters sends x y - 1 to y x - 1
        let p = pres(&["x", "y"], &["x*y - 1"]);
        let swap = MorphismSpec::new("swap", p.clone(), p, vec![NcPoly::letter(1), NcPoly::letter(0)], Variance::Morphism)
            .unwrap();
        let cert = certify_morphism(&swap, 3).unwrap();
        assert_eq!(cert.verdict(), MorphismVerdict::UnknownAtBound(3));
        assert!(MorphismSpec::new("bad", pres(&["x"], &[]), pres(&["x"], &[]), vec![], Variance::Morphism).is_err());
    }
}
