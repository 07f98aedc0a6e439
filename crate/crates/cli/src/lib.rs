//! Command layer of the `bigalois` binary: argument parsing, reports and
//! exit codes. Reports are built as JSON values and rendered as JSON or as
//! indented text from the same value.

use bigalois_core::bgalois::{
    bigalois_certificate, build_be, hopf_data, BigaloisCertificate, CertOptions, DeltaRoute, GaloisMaps, IdentityCheck,
    MapEntry, MapOptions,
};
use bigalois_core::fpalg::{Limits, MembershipVerdict, MorphismCertificate, Variance};
use bigalois_core::format::{lift_form, merge_towers, parse_form_file, parse_matrix_file};
use bigalois_core::matrix::{FormMatrix, Matrix};
use bigalois_core::scalars::{classify_genericity, quadratic_roots, FieldTower, Genericity, Scalar};
use bigalois_core::sl2rep::{tensor_decompose, fusion_contradiction_check, FusionContext, Fusion, SimpleLabel, SlError};
use bigalois_core::structure::{
    automorphism_check, congruence_invariants, cqg_verify, star_structure_verify, trace_invariant, AutomorphismVerdict,
    CongruenceVerdict, CqgVerdict, StarCheck,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "bigalois", version, about = "Exact certificates for B(E), B(E,F) and SL_q(2) fusion")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,
    /// Maximum number of adjoined roots in any field tower.
    #[arg(long, global = true, default_value_t = 3)]
    pub tower_cap: usize,
    /// Append wall-clock time to the report (breaks byte-stability).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Presentation of B(E), its trace invariant and the parameter q.
    Present {
        e: PathBuf,
        /// Also certify the coproduct, counit and antipode.
        #[arg(long)]
        hopf: bool,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Nonvanishing certificate for B(E_q, F) and, when traces agree, B(E, F).
    Bigalois {
        e: PathBuf,
        f: PathBuf,
        /// Degree up to which irreducible words are counted.
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Membership bound for certified maps.
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Skip the structure maps of (E_q, F').
        #[arg(long)]
        no_maps: bool,
        /// Word-count cap for bounded linear algebra.
        #[arg(long, default_value_t = Limits::default().max_words)]
        max_words: usize,
    },
    /// Tensor product of two simple comodules.
    Fusion {
        /// `generic` or `rootN` for a root of unity of order N.
        #[arg(long, default_value = "generic")]
        regime: String,
        /// Labels such as U3, V1, V2xU1, or an integer for U(k).
        labels: Vec<String>,
        /// Report the two incompatible descriptions of U(N0-1) (x) U(1).
        #[arg(long)]
        contradiction: bool,
    },
    /// Check a witness against a classification statement.
    Verify {
        #[arg(long, value_enum)]
        kind: VerifyKind,
        files: Vec<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Congruence,
    Automorphism,
    Star,
    Cqg,
}

/// Rendered report and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_form(path: &Path, base: &Arc<FieldTower>) -> Result<FormMatrix, InputError> {
    parse_form_file(&read(path)?, base).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path, base: &Arc<FieldTower>) -> Result<Matrix, InputError> {
    Ok(parse_matrix_file(&read(path)?, base).map_err(|e| InputError(format!("{}: {e}", path.display())))?.matrix)
}

fn tower_of(m: &Matrix) -> Arc<FieldTower> {
    m.entries().iter().map(Scalar::tower).max_by_key(|t| t.height()).cloned().unwrap_or_else(FieldTower::rationals)
}

/// Loads forms and witness matrices and moves them into one tower.
fn load_all(forms: &[&Path], mats: &[&Path], base: &Arc<FieldTower>) -> Result<(Vec<FormMatrix>, Vec<Matrix>), InputError> {
    let forms: Vec<FormMatrix> = forms.iter().map(|p| load_form(p, base)).collect::<Result<_, _>>()?;
    let mats: Vec<Matrix> = mats.iter().map(|p| load_matrix(p, base)).collect::<Result<_, _>>()?;
    let towers: Vec<Arc<FieldTower>> =
        forms.iter().map(|f| tower_of(f.matrix())).chain(mats.iter().map(tower_of)).chain([base.clone()]).collect();
    let tower = merge_towers(&towers).map_err(|e| InputError(format!("incompatible towers across files: {e}")))?;
    Ok((
        forms.iter().map(|f| lift_form(f, &tower)).collect(),
        mats.iter().map(|m| m.map(|x| x.lift_to(&tower))).collect(),
    ))
}

fn rows(m: &Matrix) -> Value {
    json!(m.row_strings())
}

fn genericity_str(g: Genericity) -> String {
    match g {
        Genericity::Generic => "generic".into(),
        Genericity::RootOfUnity(n) => format!("root of unity of order {n}"),
    }
}

fn tower_lines(scalars: &[&Scalar]) -> Value {
    let t = scalars.iter().map(|s| s.tower()).max_by_key(|t| t.height()).cloned().unwrap_or_else(FieldTower::rationals);
    json!(t.describe())
}

fn membership_str(v: &MembershipVerdict) -> String {
    match v {
        MembershipVerdict::CertifiedMember { bound, witness } => {
            format!("certified at bound {bound} ({} witness terms)", witness.len())
        }
        MembershipVerdict::UnknownAtBound(d) => format!("unknown at bound {d}"),
    }
}

fn morphism_json(c: &MorphismCertificate) -> Value {
    let certified = c.checks.iter().filter(|k| k.verdict.is_member()).count();
    json!({
        "verdict": if c.is_certified() { "Certified".to_string() } else { format!("UnknownAtBound({})", c.bound) },
        "relations_certified": format!("{certified}/{}", c.checks.len()),
        "bound_used": c.bound_used(),
    })
}

fn map_json(m: &MapEntry) -> Value {
    let mut v = json!({
        "name": m.name,
        "formula": m.formula,
        "source": m.source,
        "target": m.target,
        "variance": match m.variance { Variance::Morphism => "morphism", Variance::AntiMorphism => "anti-morphism" },
    });
    if let (Value::Object(o), Value::Object(c)) = (&mut v, morphism_json(&m.certificate)) {
        o.extend(c);
    }
    v
}

fn identity_json(c: &IdentityCheck) -> Value {
    let certified = c.verdicts.iter().filter(|v| v.is_member()).count();
    json!({
        "name": c.name,
        "in": c.presentation,
        "bound": c.bound,
        "certified": format!("{certified}/{}", c.verdicts.len()),
    })
}

fn maps_json(g: &GaloisMaps) -> Value {
    json!({
        "maps": g.maps.iter().map(map_json).collect::<Vec<_>>(),
        "identities": g.identities.iter().map(identity_json).collect::<Vec<_>>(),
        "laws": g.laws.iter().map(|l| json!({"name": l.name, "holds": l.holds})).collect::<Vec<_>>(),
        "delta_skipped": g.delta_skipped,
        "all_certified": g.all_certified(),
    })
}

/// JSON form of a certificate; `top` adds the pair-level fields.
pub fn certificate_json(c: &BigaloisCertificate, top: bool) -> Value {
    let mut o = Map::new();
    o.insert("E".into(), rows(c.e.matrix()));
    o.insert("F".into(), rows(c.f.matrix()));
    o.insert("trace".into(), json!(c.trace.to_string()));
    o.insert("q".into(), json!(c.q.as_ref().map(ToString::to_string)));
    o.insert("q_inverse".into(), json!(c.q_inv.as_ref().map(ToString::to_string)));
    o.insert("genericity".into(), json!(c.genericity.map(genericity_str)));
    o.insert("tower".into(), json!(c.tower));
    if let Some(n) = &c.normalization {
        o.insert(
            "normalization".into(),
            json!({
                "kind": format!("{:?}", n.kind),
                "lambda": n.lambda.as_ref().map(ToString::to_string),
                "P": rows(&n.p),
                "F_normalized": rows(n.normalized.matrix()),
            }),
        );
    }
    if let Some(t) = &c.transport {
        o.insert(
            "transport".into(),
            json!({
                "psi": map_json(&t.psi),
                "psi_inverse": map_json(&t.psi_inverse),
                "inverse_law": t.inverse_law.holds,
            }),
        );
    }
    if let Some(s) = &c.system {
        o.insert("rewrite_system".into(), json!({ "alphabet": s.alphabet().names(), "rules": s.rule_strings() }));
    }
    if let Some(eq) = &c.equivalence {
        let members = eq.rules_in_ideal.iter().filter(|v| v.is_member()).count();
        let zeros = eq.relation_normal_forms.iter().filter(|f| f.is_zero()).count();
        o.insert(
            "equivalence".into(),
            json!({
                "rules_in_ideal": format!("{members}/{} certified at bound 2", eq.rules_in_ideal.len()),
                "relations_reduce_to_zero": format!("{zeros}/{}", eq.relation_normal_forms.len()),
            }),
        );
    }
    if let (Some(conf), Some(s)) = (&c.confluence, &c.system) {
        o.insert("confluence".into(), serde_json::to_value(conf.report(s)).expect("serializable"));
    }
    o.insert("irreducible_counts".into(), json!(c.counts));
    o.insert("quotient_dims".into(), json!(c.quotient_dims));
    o.insert("pinched".into(), json!(c.pinched()));
    o.insert("nonvanishing".into(), json!(c.nonvanishing));
    if let (Some(r), Some(p)) = (&c.redundant, &c.presentation) {
        o.insert(
            "redundant_relation".into(),
            json!({
                "relation": r.relation.display(p.alphabet()).to_string(),
                "normal_form": r.normal_form.display(p.alphabet()).to_string(),
                "membership": membership_str(&r.membership),
            }),
        );
    }
    if let Some(m) = &c.maps {
        o.insert("structure_maps".into(), maps_json(m));
    }
    if top {
        o.insert("trace_condition".into(), json!(c.trace_condition));
        o.insert(
            "delta_route".into(),
            json!(match &c.delta_route {
                DeltaRoute::NotApplicable => "NotApplicable".to_string(),
                DeltaRoute::Certified => "Certified".to_string(),
                DeltaRoute::Failed(why) => format!("Failed: {why}"),
            }),
        );
        if let Some(d) = &c.delta {
            o.insert("delta".into(), map_json(d));
        }
        if let Some(sub) = &c.companion {
            o.insert("companion".into(), certificate_json(sub, false));
        }
    }
    o.insert(
        "failures".into(),
        json!(c.failures.iter().map(|f| json!({"stage": f.stage, "message": f.message})).collect::<Vec<_>>()),
    );
    Value::Object(o)
}

fn cmd_present(e: &Path, hopf: bool, bound: usize, base: &Arc<FieldTower>) -> Result<(Value, i32), InputError> {
    let (forms, _) = load_all(&[e], &[], base)?;
    let e = &forms[0];
    let p = build_be(e)?;
    let c = trace_invariant(e);
    let mut o = Map::new();
    o.insert("presentation".into(), json!(p.name()));
    o.insert("letters".into(), json!(p.alphabet().names()));
    o.insert("relations".into(), json!(p.relation_strings()));
    o.insert("trace".into(), json!(c.to_string()));
    o.insert("q_equation".into(), json!(format!("q^2 + ({c})*q + 1 = 0")));
    let roots = match quadratic_roots(&c, &Scalar::one()) {
        Some((a, b)) => vec![a, b],
        None => {
            let (q, q_inv) = bigalois_core::scalars::solve_sl2_parameter(&c)?;
            vec![q, q_inv]
        }
    };
    let mut all_generic = true;
    let mut listed = Vec::new();
    for r in &roots {
        let g = classify_genericity(r)?;
        all_generic &= g == Genericity::Generic;
        listed.push(json!({"q": r.to_string(), "genericity": genericity_str(g)}));
    }
    o.insert("tower".into(), tower_lines(&roots.iter().collect::<Vec<_>>()));
    o.insert("roots".into(), json!(listed));
    o.insert(
        "cosemisimple".into(),
        json!(if all_generic { "yes: q is generic" } else { "no: q is a root of unity, B(E) is not cosemisimple" }),
    );
    let mut code = EXIT_OK;
    if hopf {
        let h = hopf_data(e, &MapOptions { bound, ..MapOptions::default() })?;
        o.insert(
            "hopf".into(),
            json!({
                "maps": h.maps.iter().map(map_json).collect::<Vec<_>>(),
                "laws": h.laws.iter().map(|l| json!({"name": l.name, "holds": l.holds})).collect::<Vec<_>>(),
                "comodule_form": identity_json(&h.comodule_form),
            }),
        );
        if !h.all_certified() {
            code = EXIT_UNDETERMINED;
        }
    }
    Ok((Value::Object(o), code))
}

fn cmd_bigalois(
    e: &Path,
    f: &Path,
    opts: &CertOptions,
    base: &Arc<FieldTower>,
) -> Result<(Value, i32), InputError> {
    let (forms, _) = load_all(&[e, f], &[], base)?;
    let cert = bigalois_certificate(&forms[0], &forms[1], opts);
    let mut v = certificate_json(&cert, true);
    let code = if cert.failures.iter().any(|s| s.stage == "input") {
        EXIT_INPUT
    } else if cert.all_certified() {
        EXIT_OK
    } else if cert.trace_condition == Some(false) {
        EXIT_NEGATIVE
    } else {
        EXIT_UNDETERMINED
    };
    let verdict = match code {
        EXIT_OK => "Certified".to_string(),
        EXIT_NEGATIVE => "TraceConditionFails".to_string(),
        _ => match cert.failures.first() {
            Some(s) => format!("Failed at stage {}", s.stage),
            None => "NotEstablished".to_string(),
        },
    };
    if let Value::Object(o) = &mut v {
        o.insert("verdict".into(), json!(verdict));
    }
    Ok((v, code))
}

fn parse_regime(s: &str) -> Result<FusionContext, InputError> {
    if s == "generic" {
        return Ok(FusionContext::generic());
    }
    let n = s
        .strip_prefix("root")
        .and_then(|n| n.parse::<u32>().ok())
        .ok_or_else(|| InputError(format!("regime must be `generic` or `rootN`, got {s:?}")))?;
    Ok(FusionContext::root_of_unity(n)?)
}

fn cmd_fusion(regime: &str, labels: &[String], contradiction: bool) -> Result<(Value, i32), InputError> {
    let ctx = parse_regime(regime)?;
    let mut o = Map::new();
    o.insert("regime".into(), json!(regime));
    if let Some(n0) = ctx.n0() {
        o.insert("N0".into(), json!(n0));
    }
    if contradiction {
        let bigalois_core::sl2rep::Regime::RootOfUnity { order, .. } = ctx.regime else {
            return Err(InputError("--contradiction needs a root-of-unity regime".into()));
        };
        let r = fusion_contradiction_check(order)?;
        let names = |v: &[SimpleLabel]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ");
        o.insert("semisimple_ladder".into(), json!(names(&r.ladder)));
        o.insert("composition_factors".into(), json!(names(&r.filtration)));
        o.insert("dims".into(), json!(format!("{} = {}", r.ladder_dim, r.filtration_dim)));
        o.insert("factors_differ".into(), json!(r.factors_differ));
        return Ok((Value::Object(o), if r.factors_differ { EXIT_OK } else { EXIT_NEGATIVE }));
    }
    let [x, y] = labels else {
        return Err(InputError("fusion needs exactly two labels".into()));
    };
    let x: SimpleLabel = x.parse()?;
    let y: SimpleLabel = y.parse()?;
    o.insert("product".into(), json!(format!("{x} (x) {y}")));
    let code = match tensor_decompose(x, y, &ctx) {
        Ok(Fusion::Decomposed(r)) => {
            o.insert("decomposition".into(), json!(r.to_string()));
            o.insert("dims".into(), json!(format!("{} = {}", x.dim() * y.dim(), bigalois_core::sl2rep::dim_of(&r))));
            EXIT_OK
        }
        Ok(Fusion::NonSemisimple(fr)) => {
            o.insert("filtration".into(), json!(fr.to_string()));
            o.insert("semisimple".into(), json!(false));
            o.insert("dims".into(), json!(format!("{} = {}", x.dim() * y.dim(), Fusion::NonSemisimple(fr).dim())));
            EXIT_OK
        }
        Err(e @ SlError::OutOfSpecifiedRange(..)) => {
            o.insert("error".into(), json!(e.to_string()));
            EXIT_UNDETERMINED
        }
        Err(e) => return Err(e.into()),
    };
    Ok((Value::Object(o), code))
}

fn star_json(s: &StarCheck) -> Value {
    json!({
        "form_condition": s.form_condition,
        "scalar_condition": s.scalar_condition,
        "lambda": s.lambda.as_ref().map(ToString::to_string),
        "lambda_real": s.lambda_real,
        "undetermined": s.undetermined,
    })
}

fn cmd_verify(
    kind: VerifyKind,
    files: &[PathBuf],
    witness: Option<&Path>,
    base: &Arc<FieldTower>,
) -> Result<(Value, i32), InputError> {
    let want = if kind == VerifyKind::Congruence { 2 } else { 1 };
    if files.len() != want {
        return Err(InputError(format!("--kind {kind:?} takes {want} matrix file(s), got {}", files.len())));
    }
    if kind != VerifyKind::Congruence && witness.is_none() {
        return Err(InputError(format!("--kind {kind:?} needs --witness")));
    }
    let form_paths: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
    let (forms, mats) = load_all(&form_paths, &witness.into_iter().collect::<Vec<_>>(), base)?;
    let w = mats.first();
    let mut o = Map::new();
    let code = match kind {
        VerifyKind::Congruence => {
            let r = congruence_invariants(&forms[0], &forms[1], w);
            o.insert("sizes_match".into(), json!(r.sizes_match));
            o.insert("trace_equal".into(), json!(r.trace_equal));
            if r.sizes_match {
                o.insert(
                    "traces".into(),
                    json!([trace_invariant(&forms[0]).to_string(), trace_invariant(&forms[1]).to_string()]),
                );
            }
            o.insert("asymmetry_similar".into(), json!(r.asymmetry_similar));
            o.insert("invariant_factors_E".into(), json!(r.invariant_factors.0));
            o.insert("invariant_factors_F".into(), json!(r.invariant_factors.1));
            let (verdict, code) = match &r.verdict {
                CongruenceVerdict::CongruentWithWitness => ("CongruentWithWitness".to_string(), EXIT_OK),
                CongruenceVerdict::Inconclusive => {
                    let why = if w.is_some() { "Inconclusive (witness rejected)" } else { "Inconclusive" };
                    (why.to_string(), EXIT_UNDETERMINED)
                }
                CongruenceVerdict::NotCongruent { reason } => (format!("NotCongruent: {reason}"), EXIT_NEGATIVE),
            };
            o.insert("verdict".into(), json!(verdict));
            code
        }
        VerifyKind::Automorphism => {
            let v = automorphism_check(&forms[0], &mats[0])?;
            o.insert("verdict".into(), json!(format!("{v:?}")));
            if v == AutomorphismVerdict::No {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            }
        }
        VerifyKind::Star => {
            let s = star_structure_verify(&forms[0], &mats[0])?;
            o.insert("star".into(), star_json(&s));
            let (verdict, code) = if s.undetermined.is_some() {
                ("Undetermined", EXIT_UNDETERMINED)
            } else if s.holds() {
                ("StarStructure", EXIT_OK)
            } else {
                ("NoStarStructure", EXIT_NEGATIVE)
            };
            o.insert("verdict".into(), json!(verdict));
            code
        }
        VerifyKind::Cqg => {
            let r = cqg_verify(&forms[0], &mats[0])?;
            o.insert("star".into(), star_json(&r.star));
            let (verdict, code) = match &r.cqg {
                CqgVerdict::Cqg { mu, h, minors } => {
                    o.insert("mu".into(), json!(mu.to_string()));
                    o.insert("H".into(), rows(h));
                    o.insert("muH".into(), rows(&h.scale(mu)));
                    o.insert("leading_minors".into(), json!(minors.iter().map(ToString::to_string).collect::<Vec<_>>()));
                    ("CQG".to_string(), EXIT_OK)
                }
                CqgVerdict::NotCqg(why) => (format!("NotCQG: {why}"), EXIT_NEGATIVE),
                CqgVerdict::NotApplicable => ("NotApplicable: star conditions fail".to_string(), EXIT_NEGATIVE),
                CqgVerdict::Undetermined(why) => (format!("Undetermined: {why}"), EXIT_UNDETERMINED),
            };
            o.insert("verdict".into(), json!(verdict));
            code
        }
    };
    Ok((Value::Object(o), code))
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render_text(v: &Value, pad: usize, out: &mut String) {
    let sp = " ".repeat(pad);
    match v {
        Value::Object(o) => {
            for (k, val) in o {
                match val {
                    Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_))) => {
                        let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                        out.push_str(&format!("{sp}{k}: [{}]\n", parts.join(", ")));
                    }
                    Value::Array(a) if a.is_empty() => out.push_str(&format!("{sp}{k}: none\n")),
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{sp}{k}:\n"));
                        render_text(val, pad + 2, out);
                    }
                    _ => out.push_str(&format!("{sp}{k}: {}\n", scalar_text(val).unwrap_or_default())),
                }
            }
        }
        Value::Array(a) => {
            for item in a {
                match scalar_text(item) {
                    Some(s) => out.push_str(&format!("{sp}- {s}\n")),
                    None => {
                        let mut inner = String::new();
                        render_text(item, pad + 2, &mut inner);
                        out.push_str(&sp);
                        out.push_str("- ");
                        out.push_str(inner.get(pad + 2..).unwrap_or(""));
                    }
                }
            }
        }
        other => out.push_str(&format!("{sp}{}\n", scalar_text(other).unwrap_or_default())),
    }
}

/// Renders a report in the requested format.
pub fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        OutputFormat::Text => {
            let mut s = String::new();
            render_text(v, 0, &mut s);
            s
        }
    }
}

fn echo(cli: &Cli) -> String {
    match &cli.command {
        Command::Present { e, .. } => format!("present {}", e.display()),
        Command::Bigalois { e, f, degree, bound, .. } => {
            format!("bigalois {} {} --degree {degree} --bound {bound}", e.display(), f.display())
        }
        Command::Fusion { regime, labels, contradiction } => {
            format!("fusion --regime {regime} {}{}", labels.join(" "), if *contradiction { " --contradiction" } else { "" })
                .replace("  ", " ")
        }
        Command::Verify { kind, files, witness } => {
            let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
            let w = witness.as_ref().map(|p| format!(" --witness {}", p.display())).unwrap_or_default();
            format!("verify --kind {} {}{w}", format!("{kind:?}").to_lowercase(), files.join(" "))
        }
    }
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let base = FieldTower::rationals_with_cap(cli.tower_cap);
    let result = match &cli.command {
        Command::Present { e, hopf, bound } => cmd_present(e, *hopf, *bound, &base),
        Command::Bigalois { e, f, degree, bound, no_maps, max_words } => {
            let opts = CertOptions {
                degree: *degree,
                bound: *bound,
                limits: Limits { max_words: *max_words },
                maps: !no_maps,
            };
            cmd_bigalois(e, f, &opts, &base)
        }
        Command::Fusion { regime, labels, contradiction } => cmd_fusion(regime, labels, *contradiction),
        Command::Verify { kind, files, witness } => cmd_verify(*kind, files, witness.as_deref(), &base),
    };
    let (body, code) = match result {
        Ok(r) => r,
        Err(InputError(msg)) => (json!({ "error": msg }), EXIT_INPUT),
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(echo(cli)));
    if let Value::Object(o) = body {
        report.extend(o);
    }
    report.insert("exit".into(), json!(code));
    if cli.timing {
        report.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
    }
    Outcome { output: render(&Value::Object(report), cli.format), code }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            Outcome { output: e.to_string(), code }
        }
    }
}
