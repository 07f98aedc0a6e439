//! Matrix-level checks: congruence of forms, automorphisms of a form, and the
//! star and compact-quantum-group conditions on `B(E)`.

use crate::bgalois::trace_of_form;
use crate::matrix::{FormMatrix, Matrix};
use crate::scalars::{Scalar, ScalarError};
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum StructError {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
}

fn same_size(what: &str, a: usize, b: usize) -> Result<(), StructError> {
    if a != b {
        return Err(StructError::SizeMismatch(format!("{what}: {a} vs {b}")));
    }
    Ok(())
}

/// `tr(E tE^-1)`.
pub fn trace_invariant(e: &FormMatrix) -> Scalar {
    trace_of_form(e)
}

/// Exact check of `F = tM E M`.
pub fn congruence_verify(e: &FormMatrix, f: &FormMatrix, m: &Matrix) -> Result<bool, StructError> {
    same_size("E and F", e.size(), f.size())?;
    if m.rows() != e.size() || m.cols() != e.size() {
        return Err(StructError::SizeMismatch(format!("witness is {}x{}, forms are {}", m.rows(), m.cols(), e.size())));
    }
    Ok(m.transpose().mul(e.matrix()).mul(m) == *f.matrix())
}

/// Dense univariate polynomial, lowest coefficient first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct UPoly(Vec<Scalar>);

impl UPoly {
    fn new(mut c: Vec<Scalar>) -> UPoly {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    fn zero() -> UPoly {
        UPoly(Vec::new())
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Scalar {
        self.0.last().expect("nonzero polynomial")
    }

    fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Scalar::zero();
        UPoly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(out)
    }

    fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let mut r = self.clone();
        let mut q = vec![Scalar::zero(); self.0.len().saturating_sub(d.0.len()) + 1];
        let inv = d.lead().inv().expect("nonzero leading coefficient");
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let c = r.lead() * &inv;
            let mut t = vec![Scalar::zero(); shift];
            t.extend(d.0.iter().map(|x| -&(x * &c)));
            q[shift] = &q[shift] + &c;
            r = r.add(&UPoly::new(t));
        }
        (UPoly::new(q), r)
    }

    fn monic(&self) -> UPoly {
        match self.0.last() {
            None => UPoly::zero(),
            Some(l) => {
                let inv = l.inv().expect("nonzero");
                UPoly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let complex = s[1..].contains(['+', '-']);
            let body = match (k, s.as_str()) {
                (0, _) => s.clone(),
                (_, "1") => String::new(),
                (_, "-1") => "-".into(),
                _ if complex => format!("({s})*"),
                _ => format!("{s}*"),
            };
            let mono = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            let term = format!("{body}{mono}");
            if !out.is_empty() {
                if let Some(rest) = term.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                    continue;
                }
                out.push_str(" + ");
            }
            out.push_str(&term);
        }
        out
    }
}

/// Monic invariant factors of `x I - A` (Smith normal form over `K[x]`).
fn invariant_factors(a: &Matrix) -> Vec<UPoly> {
    let n = a.rows();
    let mut m: Vec<Vec<UPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -&a[(i, j)];
                    UPoly::new(if i == j { vec![c, Scalar::one()] } else { vec![c] })
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        while let Some((pi, pj)) = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| m[i][j].degree())
        {
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..n {
                let (q, r) = m[i][k].divrem(&m[k][k]);
                clean &= r.is_zero();
                let nq = q.neg();
                for j in k..n {
                    let t = nq.mul(&m[k][j]);
                    m[i][j] = m[i][j].add(&t);
                }
            }
            for j in k + 1..n {
                let (q, r) = m[k][j].divrem(&m[k][k]);
                clean &= r.is_zero();
                let nq = q.neg();
                for i in k..n {
                    let t = m[i][k].mul(&nq);
                    m[i][j] = m[i][j].add(&t);
                }
            }
            if !clean {
                continue;
            }
            let bad = (k + 1..n)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].divrem(&m[k][k]).1.is_zero());
            match bad {
                Some((i, _)) => {
                    for j in k..n {
                        let t = m[i][j].clone();
                        m[k][j] = m[k][j].add(&t);
                    }
                }
                None => break,
            }
        }
    }
    (0..n).map(|k| m[k][k].monic()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CongruenceVerdict {
    NotCongruent { reason: String },
    Inconclusive,
    CongruentWithWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub sizes_match: bool,
    pub trace_equal: bool,
    pub asymmetry_similar: bool,
    /// Nontrivial invariant factors of `x I - E^-T E` and of `x I - F^-T F`.
    pub invariant_factors: (Vec<String>, Vec<String>),
    pub verdict: CongruenceVerdict,
}

fn asymmetry(e: &FormMatrix) -> Matrix {
    e.inverse().transpose().mul(e.matrix())
}

fn render_factors(f: &[UPoly]) -> Vec<String> {
    f.iter().filter(|p| p.degree() > 0).map(UPoly::render).collect()
}

/// Necessary conditions for `F = tM E M`; a supplied witness that verifies
/// upgrades `Inconclusive`.
pub fn congruence_invariants(e: &FormMatrix, f: &FormMatrix, witness: Option<&Matrix>) -> CongruenceReport {
    let sizes_match = e.size() == f.size();
    if !sizes_match {
        return CongruenceReport {
            sizes_match,
            trace_equal: false,
            asymmetry_similar: false,
            invariant_factors: (Vec::new(), Vec::new()),
            verdict: CongruenceVerdict::NotCongruent { reason: format!("sizes {} and {}", e.size(), f.size()) },
        };
    }
    let (te, tf) = (trace_invariant(e), trace_invariant(f));
    let trace_equal = te == tf;
    let fe = invariant_factors(&asymmetry(e));
    let ff = invariant_factors(&asymmetry(f));
    let asymmetry_similar = fe == ff;
    let verdict = if !trace_equal {
        CongruenceVerdict::NotCongruent { reason: format!("trace invariants {te} and {tf}") }
    } else if !asymmetry_similar {
        CongruenceVerdict::NotCongruent { reason: "asymmetry operators are not similar".into() }
    } else if witness.is_some_and(|m| congruence_verify(e, f, m).unwrap_or(false)) {
        CongruenceVerdict::CongruentWithWitness
    } else {
        CongruenceVerdict::Inconclusive
    };
    CongruenceReport {
        sizes_match,
        trace_equal,
        asymmetry_similar,
        invariant_factors: (render_factors(&fe), render_factors(&ff)),
        verdict,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AutomorphismVerdict {
    /// `tP E P = E` and `P != +-I`.
    InGE,
    /// `P = +-I`: the trivial class of `G_E`.
    IdentityClass,
    No,
}

pub fn automorphism_check(e: &FormMatrix, p: &Matrix) -> Result<AutomorphismVerdict, StructError> {
    same_size("E and P", e.size(), p.rows())?;
    same_size("P rows and columns", p.rows(), p.cols())?;
    if p.transpose().mul(e.matrix()).mul(p) != *e.matrix() {
        return Ok(AutomorphismVerdict::No);
    }
    let id = Matrix::identity(e.size());
    Ok(if *p == id || *p == id.scale(&Scalar::from_int(-1)) {
        AutomorphismVerdict::IdentityClass
    } else {
        AutomorphismVerdict::InGE
    })
}

/// `P` and `Q` define the same element of `G_E` (they agree up to sign).
pub fn same_class(p: &Matrix, q: &Matrix) -> bool {
    p == q || *p == q.scale(&Scalar::from_int(-1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCheck {
    /// `tM E* M = E`, with `E*` the conjugate transpose.
    pub form_condition: bool,
    /// `conj(M) M` is scalar.
    pub scalar_condition: bool,
    pub lambda: Option<Scalar>,
    pub lambda_real: bool,
    /// Conjugation was not available on the tower.
    pub undetermined: Option<String>,
}

impl StarCheck {
    pub fn holds(&self) -> bool {
        self.form_condition && self.scalar_condition && self.lambda_real
    }
}

fn undetermined_star(e: ScalarError) -> StarCheck {
    StarCheck {
        form_condition: false,
        scalar_condition: false,
        lambda: None,
        lambda_real: false,
        undetermined: Some(e.to_string()),
    }
}

pub fn star_structure_verify(e: &FormMatrix, m: &Matrix) -> Result<StarCheck, StructError> {
    let n = e.size();
    same_size("E and M", n, m.rows())?;
    same_size("M rows and columns", m.rows(), m.cols())?;
    let (e_star, m_bar) = match (e.matrix().adjoint(), m.conj()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(err), _) | (_, Err(err)) => return Ok(undetermined_star(err)),
    };
    let form_condition = m.transpose().mul(&e_star).mul(m) == *e.matrix();
    let mm = m_bar.mul(m);
    let lambda = mm[(0, 0)].clone();
    let scalar_condition = !lambda.is_zero() && mm == Matrix::identity(n).scale(&lambda);
    let lambda_real = scalar_condition && crate::scalars::is_conjugation_fixed(&lambda).unwrap_or(false);
    Ok(StarCheck {
        form_condition,
        scalar_condition,
        lambda: scalar_condition.then_some(lambda),
        lambda_real,
        undetermined: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CqgVerdict {
    /// The star conditions fail, so there is no Hopf *-structure to test.
    NotApplicable,
    /// `mu tM^-1 E` is positive definite.
    Cqg { mu: Scalar, h: Matrix, minors: Vec<Scalar> },
    NotCqg(String),
    Undetermined(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarReport {
    pub star: StarCheck,
    pub cqg: CqgVerdict,
}

fn positive_minors(k: &Matrix) -> Result<Option<usize>, String> {
    for (idx, d) in k.leading_minors().iter().enumerate() {
        match d.sign() {
            Some(Ordering::Greater) => {}
            Some(_) => return Ok(Some(idx + 1)),
            None => return Err(format!("sign of leading minor {} ({d}) is not decidable in the tower", idx + 1)),
        }
    }
    Ok(None)
}

/// Looks for `mu` with `mu tM^-1 E` positive, through Sylvester's criterion.
pub fn cqg_verify(e: &FormMatrix, m: &Matrix) -> Result<StarReport, StructError> {
    let star = star_structure_verify(e, m)?;
    if !star.holds() {
        let cqg = match &star.undetermined {
            Some(why) => CqgVerdict::Undetermined(why.clone()),
            None => CqgVerdict::NotApplicable,
        };
        return Ok(StarReport { star, cqg });
    }
    let Some(minv) = m.inverse() else {
        return Ok(StarReport { star, cqg: CqgVerdict::NotCqg("M is singular".into()) });
    };
    let h = minv.transpose().mul(e.matrix());
    let cqg = match decide_cqg(&h) {
        Ok(v) => v,
        Err(err) => CqgVerdict::Undetermined(err.to_string()),
    };
    Ok(StarReport { star, cqg })
}

fn decide_cqg(h: &Matrix) -> Result<CqgVerdict, ScalarError> {
    let n = h.rows();
    let h_star = h.adjoint()?;
    let (i, j) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !h[(i, j)].is_zero())
        .expect("H is invertible");
    let c = &h_star[(i, j)] / &h[(i, j)];
    if h_star != h.scale(&c) {
        return Ok(CqgVerdict::NotCqg("H* is not a scalar multiple of H".into()));
    }
    // mu H is Hermitian iff mu = c conj(mu); c conj(c) = 1 because H** = H
    let mu = if c.is_one() {
        Scalar::one()
    } else if (&c + &Scalar::one()).is_zero() {
        let t = h.entries().iter().find(|x| !x.is_zero()).expect("nonzero").tower().clone();
        match crate::scalars::extend_with_root(&t, &Scalar::zero(), &Scalar::one(), "i") {
            Ok((_, i)) => i,
            Err(e) => return Ok(CqgVerdict::Undetermined(e.to_string())),
        }
    } else {
        &Scalar::one() + &c
    };
    let mut fails = Vec::new();
    for (label, candidate) in [("mu", mu.clone()), ("-mu", -&mu)] {
        let k = h.scale(&candidate);
        match positive_minors(&k) {
            Ok(None) => return Ok(CqgVerdict::Cqg { mu: candidate, minors: k.leading_minors(), h: h.clone() }),
            Ok(Some(idx)) => fails.push(format!("leading minor {idx} of {label} H is not positive")),
            Err(why) => return Ok(CqgVerdict::Undetermined(why)),
        }
    }
    Ok(CqgVerdict::NotCqg(format!("no real multiple of mu = {mu} makes mu H positive: {}", fails.join("; "))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{extend_with_root, FieldTower};

    fn ints(rows: &[&[i64]]) -> FormMatrix {
        FormMatrix::new(Matrix::from_ints(rows)).unwrap()
    }

    fn gaussian_i() -> Scalar {
        extend_with_root(&FieldTower::rationals(), &Scalar::zero(), &Scalar::one(), "i").unwrap().1
    }

    #[test]
    fn traces() {
        let eq = FormMatrix::e_q(&Scalar::from_int(2)).unwrap();
        assert_eq!(trace_invariant(&eq), Scalar::from_ratio(-5, 2));
        assert_eq!(trace_invariant(&ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), Scalar::from_int(3));
    }

    #[test]
    fn witness_in_extension() {
        let e = ints(&[&[1, 0], &[0, 1]]);
        let f = ints(&[&[1, 0], &[0, 2]]);
        let r2 = Scalar::from_int(2).sqrt();
        let r2 = r2.unwrap_or_else(|| extend_with_root(&FieldTower::rationals(), &Scalar::zero(), &Scalar::from_int(-2), "r").unwrap().1);
        let m = Matrix::diag(&[Scalar::one(), r2]);
        assert!(congruence_verify(&e, &f, &m).unwrap());
        let mut bad = m.clone();
        bad[(0, 1)] = Scalar::one();
        assert!(!congruence_verify(&e, &f, &bad).unwrap());
        let rep = congruence_invariants(&e, &f, None);
        assert_eq!(rep.verdict, CongruenceVerdict::Inconclusive);
        assert_eq!(congruence_invariants(&e, &f, Some(&m)).verdict, CongruenceVerdict::CongruentWithWitness);
    }

    #[test]
    fn trace_separates() {
        let eq = FormMatrix::e_q(&Scalar::from_int(2)).unwrap();
        let rep = congruence_invariants(&eq, &ints(&[&[1, 0], &[0, 1]]), None);
        assert!(matches!(rep.verdict, CongruenceVerdict::NotCongruent { .. }));
        assert!(!rep.trace_equal);
    }

    #[test]
    fn invariant_factors_detect_similarity_class() {
        // same trace, different Jordan structure
        let a = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        let b = Matrix::identity(2);
        assert_ne!(invariant_factors(&a), invariant_factors(&b));
        assert_eq!(render_factors(&invariant_factors(&a)), vec!["x^2 - 2*x + 1"]);
        assert_eq!(render_factors(&invariant_factors(&b)), vec!["x - 1", "x - 1"]);
        let p = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let conj = p.inverse().unwrap().mul(&a).mul(&p);
        assert_eq!(invariant_factors(&conj), invariant_factors(&a));
    }

    #[test]
    fn congruent_pair_invariants() {
        let e = ints(&[&[1, 2, 0], &[-1, 0, 1], &[3, 1, 1]]);
        let m = Matrix::from_ints(&[&[1, 1, 0], &[0, 2, 1], &[1, 0, 1]]);
        let f = e.congruent(&m).unwrap();
        let rep = congruence_invariants(&e, &f, Some(&m));
        assert_eq!(rep.verdict, CongruenceVerdict::CongruentWithWitness);
    }

    #[test]
    fn automorphisms() {
        let e1 = ints(&[&[0, 1], &[-1, 0]]);
        assert_eq!(automorphism_check(&e1, &Matrix::identity(2)).unwrap(), AutomorphismVerdict::IdentityClass);
        assert_eq!(
            automorphism_check(&e1, &Matrix::from_ints(&[&[-1, 0], &[0, -1]])).unwrap(),
            AutomorphismVerdict::IdentityClass
        );
        assert_eq!(automorphism_check(&e1, &Matrix::from_ints(&[&[2, 3], &[1, 2]])).unwrap(), AutomorphismVerdict::InGE);
        assert_eq!(automorphism_check(&e1, &Matrix::from_ints(&[&[2, 0], &[0, 1]])).unwrap(), AutomorphismVerdict::No);
        assert!(same_class(&Matrix::identity(2), &Matrix::from_ints(&[&[-1, 0], &[0, -1]])));
    }

    #[test]
    fn cqg_fixtures() {
        let id = ints(&[&[1, 0], &[0, 1]]);
        let r = cqg_verify(&id, &Matrix::identity(2)).unwrap();
        assert!(r.star.holds());
        assert_eq!(r.star.lambda, Some(Scalar::one()));
        assert!(matches!(&r.cqg, CqgVerdict::Cqg { mu, .. } if mu.is_one()));

        let e1 = ints(&[&[0, 1], &[-1, 0]]);
        let i = gaussian_i();
        let m = e1.matrix().scale(&i);
        let r = cqg_verify(&e1, &m).unwrap();
        assert!(r.star.holds());
        assert_eq!(r.star.lambda, Some(Scalar::from_int(-1)));
        match &r.cqg {
            CqgVerdict::Cqg { mu, h, .. } => {
                assert_eq!(*mu, -&i);
                assert_eq!(h.scale(mu), Matrix::identity(2));
            }
            other => panic!("{other:?}"),
        }

        let r = star_structure_verify(&e1, e1.matrix()).unwrap();
        assert!(!r.form_condition);

        let d = ints(&[&[1, 0], &[0, -1]]);
        let r = cqg_verify(&d, &Matrix::identity(2)).unwrap();
        assert!(r.star.holds());
        assert!(matches!(r.cqg, CqgVerdict::NotCqg(_)));
    }
}
