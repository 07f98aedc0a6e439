//! The end-to-end check that `B(E_q, F)` is nonzero, and that `B(E, F)` is
//! nonzero whenever the traces of `E` and `F` agree.

use super::maps::{delta_map, structure_maps, transport_maps, GaloisMaps, LawCheck, MapEntry, MapOptions};
use super::{
    build_bef_with, build_sl2_rewrite_system, normalize_form, redundant_relation, trace_of_form, BgError, Normalization,
};
use crate::fpalg::{membership_batch, quotient_dim_bounded_with, FpError, Limits, MembershipVerdict, Presentation};
use crate::freealg::NcPoly;
use crate::matrix::{FormMatrix, Matrix, MatrixError};
use crate::rewrite::{certify_confluence, count_irreducible, ConfluenceCertificate, RewriteSystem};
use crate::scalars::{classify_genericity, solve_sl2_parameter, FieldTower, Genericity, Scalar};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct CertOptions {
    /// Degree up to which irreducible words are counted.
    pub degree: usize,
    /// Membership bound for every certified map.
    pub bound: usize,
    pub limits: Limits,
    /// Attach the structure maps of `(E_q, F')`.
    pub maps: bool,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions { degree: 3, bound: 4, limits: Limits::default(), maps: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageFailure {
    pub stage: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaRoute {
    /// `E` is `E_q` itself.
    NotApplicable,
    Certified,
    Failed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Nonvanishing {
    Positive,
    NotEstablished,
}

/// The relation `sum beta_ij z[2,i] z[1,j] - 1` left out of the rules.
#[derive(Debug, Clone)]
pub struct RedundantRelation {
    pub relation: NcPoly,
    pub normal_form: NcPoly,
    pub membership: MembershipVerdict,
}

/// Rules and relations generate the same ideal.
#[derive(Debug, Clone)]
pub struct Equivalence {
    /// `lhs - rhs` of each rule, as a member of the relation ideal at bound 2.
    pub rules_in_ideal: Vec<MembershipVerdict>,
    /// Normal form of each relation under the rules.
    pub relation_normal_forms: Vec<NcPoly>,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        self.rules_in_ideal.iter().all(MembershipVerdict::is_member)
            && self.relation_normal_forms.iter().all(NcPoly::is_zero)
    }
}

#[derive(Debug, Clone)]
pub struct Transport {
    pub psi: MapEntry,
    pub psi_inverse: MapEntry,
    pub inverse_law: LawCheck,
}

impl Transport {
    pub fn is_certified(&self) -> bool {
        self.psi.certificate.is_certified() && self.psi_inverse.certificate.is_certified() && self.inverse_law.holds
    }
}

#[derive(Debug, Clone)]
pub struct BigaloisCertificate {
    pub e: FormMatrix,
    pub f: FormMatrix,
    pub trace: Scalar,
    pub q: Option<Scalar>,
    pub q_inv: Option<Scalar>,
    pub genericity: Option<Genericity>,
    pub normalization: Option<Normalization>,
    /// Certified isomorphism `B(E_q, F) -> B(E_q, F')`; absent when normalization was skipped.
    pub transport: Option<Transport>,
    /// `B(E_q, F')`.
    pub presentation: Option<Presentation>,
    pub system: Option<RewriteSystem>,
    pub equivalence: Option<Equivalence>,
    pub confluence: Option<ConfluenceCertificate>,
    /// Irreducible words per degree.
    pub counts: Vec<u128>,
    /// Cumulative bounded quotient dimensions, when under the word cap.
    pub quotient_dims: Option<Vec<u128>>,
    pub nonvanishing: Nonvanishing,
    pub redundant: Option<RedundantRelation>,
    pub maps: Option<GaloisMaps>,
    /// `tr(E tE^-1) = tr(F tF^-1)`; `None` when `E = E_q`.
    pub trace_condition: Option<bool>,
    pub delta_route: DeltaRoute,
    pub delta: Option<MapEntry>,
    /// The same check for `(E_q, E)`, run when `E != E_q`.
    pub companion: Option<Box<BigaloisCertificate>>,
    pub tower: Vec<String>,
    pub failures: Vec<StageFailure>,
}

impl BigaloisCertificate {
    fn empty(e: &FormMatrix, f: &FormMatrix) -> BigaloisCertificate {
        BigaloisCertificate {
            e: e.clone(),
            f: f.clone(),
            trace: trace_of_form(f),
            q: None,
            q_inv: None,
            genericity: None,
            normalization: None,
            transport: None,
            presentation: None,
            system: None,
            equivalence: None,
            confluence: None,
            counts: Vec::new(),
            quotient_dims: None,
            nonvanishing: Nonvanishing::NotEstablished,
            redundant: None,
            maps: None,
            trace_condition: None,
            delta_route: DeltaRoute::NotApplicable,
            delta: None,
            companion: None,
            tower: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.nonvanishing == Nonvanishing::Positive
    }

    /// Every attached check passed, including the route to `B(E, F)`.
    pub fn all_certified(&self) -> bool {
        self.failures.is_empty()
            && self.is_positive()
            && self.transport.as_ref().is_none_or(Transport::is_certified)
            && self.redundant.as_ref().is_some_and(|r| r.normal_form.is_zero() && r.membership.is_member())
            && self.maps.as_ref().is_none_or(GaloisMaps::all_certified)
            && self.trace_condition != Some(false)
            && !matches!(self.delta_route, DeltaRoute::Failed(_))
            && self.companion.as_ref().is_none_or(|c| c.all_certified())
    }

    /// Pinching: cumulative irreducible counts equal the bounded quotient dimensions.
    pub fn pinched(&self) -> Option<bool> {
        let dims = self.quotient_dims.as_ref()?;
        let mut acc = 0u128;
        Some(self.counts.iter().zip(dims).all(|(c, d)| {
            acc += c;
            acc == *d
        }))
    }
}

type Staged<T> = Result<T, (&'static str, BgError)>;

fn at<T, E: Into<BgError>>(stage: &'static str, r: Result<T, E>) -> Staged<T> {
    r.map_err(|e| (stage, e.into()))
}

fn tallest<'a>(scalars: impl IntoIterator<Item = &'a Scalar>) -> Arc<FieldTower> {
    scalars
        .into_iter()
        .map(Scalar::tower)
        .max_by_key(|t| t.height())
        .cloned()
        .unwrap_or_else(FieldTower::rationals)
}

/// Runs the pipeline for `(E, F)`. Stage errors are recorded in `failures`
/// and stop the stages that depend on them.
pub fn bigalois_certificate(e: &FormMatrix, f: &FormMatrix, opts: &CertOptions) -> BigaloisCertificate {
    let mut cert = BigaloisCertificate::empty(e, f);
    if let Err((stage, err)) = run(&mut cert, e, f, opts, true) {
        cert.failures.push(StageFailure { stage, message: err.to_string() });
    }
    cert
}

fn run(cert: &mut BigaloisCertificate, e: &FormMatrix, f: &FormMatrix, opts: &CertOptions, companion: bool) -> Staged<()> {
    let n = f.size();
    if n < 2 || e.size() < 2 {
        return Err(("input", BgError::TooSmall(n.min(e.size()))));
    }
    let map_opts = MapOptions { bound: opts.bound, psi: None, limits: opts.limits };
    let (q, q_inv) = at("parameter", solve_sl2_parameter(&cert.trace))?;
    cert.genericity = Some(at("parameter", classify_genericity(&q))?);
    cert.q = Some(q.clone());
    cert.q_inv = Some(q_inv);
    let eq = at("parameter", FormMatrix::e_q(&q))?;

    let norm = at("normalization", normalize_form(f, q.tower()))?;
    let fp = norm.normalized.clone();
    if norm.kind != super::NormalizationKind::Skipped {
        // psi with P_E = I and Q = tP^-1, i.e. y -> y tP
        let qmat = norm.p.inverse().ok_or(MatrixError::Singular).map_err(|e| ("transport", e.into()))?.transpose();
        let (psi, psi_inverse, inverse_law) =
            at("transport", transport_maps(&eq, f, &Matrix::identity(2), &qmat, "B(E_q,F')", &map_opts))?;
        cert.transport = Some(Transport { psi, psi_inverse, inverse_law });
    }
    let mut scalars: Vec<&Scalar> = vec![&q];
    scalars.extend(fp.matrix().entries());
    cert.tower = tallest(scalars).describe();
    cert.normalization = Some(norm);

    let system = at("rewrite system", build_sl2_rewrite_system(&q, &fp))?;
    let pres = at("presentation", build_bef_with(&eq, &fp, "z", "B(E_q,F')"))?;
    let rule_polys: Vec<NcPoly> = system.rules().iter().map(|r| &NcPoly::word(r.lhs.clone()) - &r.rhs).collect();
    let rules_in_ideal = at("equivalence", membership_batch(&pres, &rule_polys, 2, opts.limits))?;
    let relation_normal_forms = pres.relations().iter().map(|r| system.reduce(r).0).collect();
    let equivalence = Equivalence { rules_in_ideal, relation_normal_forms };

    let confluence = certify_confluence(&system);
    cert.counts = count_irreducible(&system, opts.degree);
    cert.quotient_dims = match quotient_dim_bounded_with(&pres, opts.degree, opts.limits) {
        Ok(d) => Some(d),
        Err(FpError::ResourceCap { .. }) => None,
        Err(e) => return Err(("quotient dimensions", e.into())),
    };
    let letters_irreducible = cert.counts.get(1).copied() == Some(2 * n as u128);
    cert.nonvanishing = if confluence.is_confluent() && letters_irreducible && equivalence.holds() {
        Nonvanishing::Positive
    } else {
        Nonvanishing::NotEstablished
    };
    cert.confluence = Some(confluence);
    cert.equivalence = Some(equivalence);

    let relation = redundant_relation(&fp);
    let normal_form = system.reduce(&relation).0;
    let membership = at("redundant relation", membership_batch(&pres, std::slice::from_ref(&relation), opts.bound, opts.limits))?
        .remove(0);
    cert.redundant = Some(RedundantRelation { relation, normal_form, membership });
    cert.system = Some(system);
    cert.presentation = Some(pres);

    if opts.maps {
        cert.maps = Some(at("structure maps", structure_maps(&eq, &fp, &map_opts))?);
    }

    if *e != eq {
        let holds = trace_of_form(e) == cert.trace;
        cert.trace_condition = Some(holds);
        if !holds {
            cert.delta_route = DeltaRoute::Failed("tr(E tE^-1) differs from tr(F tF^-1)".into());
            return Ok(());
        }
        if companion {
            let mut sub = BigaloisCertificate::empty(&eq, e);
            let sub_opts = CertOptions { maps: false, ..opts.clone() };
            if let Err((stage, err)) = run(&mut sub, &eq, e, &sub_opts, false) {
                sub.failures.push(StageFailure { stage, message: err.to_string() });
            }
            cert.companion = Some(Box::new(sub));
        }
        let delta = at("delta", delta_map(e, f, &q, &map_opts))?;
        let factors_nonzero =
            cert.is_positive() && cert.companion.as_ref().is_some_and(|c| c.is_positive());
        cert.delta_route = if !delta.certificate.is_certified() {
            DeltaRoute::Failed(format!("{} relation images unknown at bound {}", delta.certificate.unknown(), opts.bound))
        } else if !factors_nonzero {
            DeltaRoute::Failed("a factor of the target was not shown nonzero".into())
        } else {
            DeltaRoute::Certified
        };
        cert.delta = Some(delta);
    }
    Ok(())
}
