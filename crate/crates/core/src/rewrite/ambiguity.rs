//! Overlap and inclusion ambiguities and their resolution.

use super::{RewriteSystem, Step};
use crate::freealg::{NcPoly, Word};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AmbiguityKind {
    Overlap,
    Inclusion,
}

/// A word reducible by two rules at two positions.
///
/// For overlaps `witness = u v x` with `lhs_a = u v`, `lhs_b = v x`, `v`
/// nonempty; for inclusions `witness = lhs_a` and `lhs_b` sits at `pos_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub kind: AmbiguityKind,
    pub rule_a: usize,
    pub rule_b: usize,
    pub witness: Word,
    pub pos_b: usize,
}

/// Both reduction routes of one ambiguity.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub trace_a: Vec<Step>,
    pub trace_b: Vec<Step>,
    pub nf_a: NcPoly,
    pub nf_b: NcPoly,
}

impl Resolution {
    pub fn resolved(&self) -> bool {
        self.nf_a == self.nf_b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfluenceVerdict {
    Confluent,
    /// The first ambiguity whose routes end in different normal forms.
    Counterexample { index: usize, nf_a: NcPoly, nf_b: NcPoly },
}

#[derive(Debug, Clone)]
pub struct ConfluenceCertificate {
    pub ambiguities: Vec<Ambiguity>,
    pub resolutions: Vec<Resolution>,
    pub verdict: ConfluenceVerdict,
}

impl ConfluenceCertificate {
    pub fn is_confluent(&self) -> bool {
        self.verdict == ConfluenceVerdict::Confluent
    }

    pub fn overlaps(&self) -> usize {
        self.ambiguities.iter().filter(|a| a.kind == AmbiguityKind::Overlap).count()
    }

    pub fn inclusions(&self) -> usize {
        self.ambiguities.iter().filter(|a| a.kind == AmbiguityKind::Inclusion).count()
    }

    /// Rendered form with words and polynomials spelled out.
    pub fn report(&self, s: &RewriteSystem) -> ConfluenceReport {
        let a = s.alphabet();
        let steps = |t: &[Step]| t.iter().map(|st| s.format_step(st)).collect::<Vec<_>>();
        let ambiguities = self
            .ambiguities
            .iter()
            .zip(&self.resolutions)
            .enumerate()
            .map(|(index, (amb, res))| AmbiguityReport {
                index,
                kind: amb.kind,
                rules: [amb.rule_a, amb.rule_b],
                witness: amb.witness.display(a).to_string(),
                route_a: steps(&res.trace_a),
                route_b: steps(&res.trace_b),
                normal_form_a: res.nf_a.display(a).to_string(),
                normal_form_b: res.nf_b.display(a).to_string(),
                resolved: res.resolved(),
            })
            .collect();
        ConfluenceReport {
            verdict: match &self.verdict {
                ConfluenceVerdict::Confluent => "Confluent".to_string(),
                ConfluenceVerdict::Counterexample { index, .. } => format!("Counterexample at ambiguity {index}"),
            },
            overlaps: self.overlaps(),
            inclusions: self.inclusions(),
            ambiguities,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AmbiguityReport {
    pub index: usize,
    pub kind: AmbiguityKind,
    pub rules: [usize; 2],
    pub witness: String,
    pub route_a: Vec<String>,
    pub route_b: Vec<String>,
    pub normal_form_a: String,
    pub normal_form_b: String,
    pub resolved: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfluenceReport {
    pub verdict: String,
    pub overlaps: usize,
    pub inclusions: usize,
    pub ambiguities: Vec<AmbiguityReport>,
}

/// All overlaps (by rule pair, then overlap length) followed by all inclusions.
pub fn find_ambiguities(s: &RewriteSystem) -> Vec<Ambiguity> {
    let rules = s.rules();
    let mut out = Vec::new();
    for (a, ra) in rules.iter().enumerate() {
        for (b, rb) in rules.iter().enumerate() {
            let (la, lb) = (ra.lhs.letters(), rb.lhs.letters());
            for k in 1..la.len().min(lb.len()) {
                if la[la.len() - k..] == lb[..k] {
                    out.push(Ambiguity {
                        kind: AmbiguityKind::Overlap,
                        rule_a: a,
                        rule_b: b,
                        witness: ra.lhs.concat(&rb.lhs.slice(k, lb.len())),
                        pos_b: la.len() - k,
                    });
                }
            }
        }
    }
    for (a, ra) in rules.iter().enumerate() {
        for (b, rb) in rules.iter().enumerate() {
            if a == b {
                continue;
            }
            for pos in ra.lhs.occurrences(&rb.lhs) {
                out.push(Ambiguity {
                    kind: AmbiguityKind::Inclusion,
                    rule_a: a,
                    rule_b: b,
                    witness: ra.lhs.clone(),
                    pos_b: pos,
                });
            }
        }
    }
    out
}

fn resolve(s: &RewriteSystem, amb: &Ambiguity) -> Resolution {
    let route = |pos: usize, rule: usize| {
        let first = Step { rule, word: amb.witness.clone(), position: pos };
        let red = s.reduce_traced(&s.apply_at(&amb.witness, pos, rule));
        let mut trace = vec![first];
        trace.extend(red.trace);
        (trace, red.normal_form)
    };
    let (trace_a, nf_a) = route(0, amb.rule_a);
    let (trace_b, nf_b) = route(amb.pos_b, amb.rule_b);
    Resolution { trace_a, trace_b, nf_a, nf_b }
}

/// Reduces every ambiguity both ways and compares full normal forms.
pub fn certify_confluence(s: &RewriteSystem) -> ConfluenceCertificate {
    let ambiguities = find_ambiguities(s);
    let resolutions: Vec<Resolution> = ambiguities.par_iter().map(|amb| resolve(s, amb)).collect();
    let verdict = match resolutions.iter().position(|r| !r.resolved()) {
        None => ConfluenceVerdict::Confluent,
        Some(index) => ConfluenceVerdict::Counterexample {
            index,
            nf_a: resolutions[index].nf_a.clone(),
            nf_b: resolutions[index].nf_b.clone(),
        },
    };
    ConfluenceCertificate { ambiguities, resolutions, verdict }
}
