//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use bigalois_core::bgalois::{
    bigalois_certificate, hopf_data, structure_maps, trace_of_form, BigaloisCertificate, CertOptions,
    MapOptions, Nonvanishing,
};
use bigalois_core::matrix::{FormMatrix, Matrix};
use bigalois_core::rewrite::{AmbiguityKind, ConfluenceVerdict};
use bigalois_core::scalars::{classify_genericity, extend_with_root, solve_sl2_parameter, FieldTower, Genericity, Scalar};
use bigalois_core::sl2rep::{
    dim_of, fusion_contradiction_check, n0_of, tensor_decompose, tensor_elements, Fusion, FusionContext, RepElement,
    SimpleLabel,
};
use bigalois_core::structure::{congruence_invariants, congruence_verify, cqg_verify, trace_invariant, CongruenceVerdict, CqgVerdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize, range: i64) -> Matrix {
    loop {
        let rows: Vec<Vec<Scalar>> =
            (0..n).map(|_| (0..n).map(|_| Scalar::from_int(rng.gen_range(-range..=range))).collect()).collect();
        let m = Matrix::from_rows(rows).expect("square");
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn random_form(rng: &mut ChaCha8Rng, n: usize) -> FormMatrix {
    FormMatrix::new(random_invertible(rng, n, 3)).expect("invertible")
}

/// Certificates for the systems of criteria 1 to 4, computed once.
struct Systems {
    certs: Vec<(usize, BigaloisCertificate)>,
    seconds: f64,
}

fn build_systems() -> Systems {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let opts = CertOptions { maps: false, ..CertOptions::default() };
    let start = Instant::now();
    let certs = (0..20)
        .map(|k| {
            let n = if k % 2 == 0 { 2 } else { 3 };
            let f = random_form(&mut rng, n);
            // Against E_q itself, so no companion run is needed.
            let (q, _) = solve_sl2_parameter(&trace_of_form(&f)).expect("parameter");
            let eq = FormMatrix::e_q(&q).expect("E_q");
            (n, bigalois_certificate(&eq, &f, &opts))
        })
        .collect();
    Systems { certs, seconds: start.elapsed().as_secs_f64() }
}

fn criterion_confluence(s: &Systems) -> Outcome {
    for (k, (n, c)) in s.certs.iter().enumerate() {
        ensure(c.failures.is_empty(), || format!("system {k}: {:?}", c.failures))?;
        let conf = c.confluence.as_ref().ok_or(format!("system {k}: no confluence data"))?;
        ensure(conf.verdict == ConfluenceVerdict::Confluent, || format!("system {k}: {:?}", conf.verdict))?;
        let overlaps = conf.ambiguities.iter().filter(|a| a.kind == AmbiguityKind::Overlap).count();
        let inclusions = conf.ambiguities.len() - overlaps;
        ensure(overlaps == 4 * n && inclusions == 0, || {
            format!("system {k} (n={n}): {overlaps} overlaps, {inclusions} inclusions")
        })?;
    }
    ensure(s.seconds < 60.0, || format!("took {:.1}s", s.seconds))?;
    Ok(format!("20 systems confluent with 4n overlaps, 0 inclusions, {:.1}s", s.seconds))
}

fn criterion_nonvanishing(s: &Systems) -> Outcome {
    for (k, (n, c)) in s.certs.iter().enumerate() {
        ensure(c.nonvanishing == Nonvanishing::Positive, || format!("system {k}: {:?}", c.nonvanishing))?;
        ensure(c.counts.get(1) == Some(&(2 * *n as u128)), || format!("system {k}: counts {:?}", c.counts))?;
    }
    Ok("all 2n letters irreducible, every certificate Positive".into())
}

fn criterion_pinching(s: &Systems) -> Outcome {
    let mut checked = 0;
    for (k, (n, c)) in s.certs.iter().enumerate().filter(|(_, (n, _))| *n == 2) {
        ensure(c.pinched() == Some(true), || {
            format!("system {k} (n={n}): counts {:?} vs dims {:?}", c.counts, c.quotient_dims)
        })?;
        checked += 1;
    }
    let opts = CertOptions { maps: false, degree: 2, ..CertOptions::default() };
    for q in [Scalar::one(), Scalar::from_int(2), Scalar::from_ratio(-1, 3)] {
        let eq = FormMatrix::e_q(&q).expect("E_q");
        let c = bigalois_certificate(&eq, &eq, &opts);
        let dims = c.quotient_dims.clone().ok_or("no quotient dims")?;
        ensure(dims == [1, 5, 14] && c.pinched() == Some(true), || format!("(E_q,E_q) with q={q}: {dims:?} vs {:?}", c.counts))?;
    }
    Ok(format!("{checked} n=2 systems pinched to degree 3; (E_q,E_q) gives 1, 5, 14"))
}

fn criterion_redundant(s: &Systems) -> Outcome {
    for (k, (_, c)) in s.certs.iter().enumerate() {
        let r = c.redundant.as_ref().ok_or(format!("system {k}: no redundant relation"))?;
        ensure(r.normal_form.is_zero(), || format!("system {k}: normal form {:?}", r.normal_form))?;
        ensure(r.membership.is_member(), || format!("system {k}: {:?}", r.membership))?;
    }
    Ok("reduces to 0 and certified at bound 4 in all 20 systems".into())
}

/// `F` of size `n` with `tr(F tF^-1) = c`, via a triangular seed and a random congruence.
fn form_with_trace(rng: &mut ChaCha8Rng, n: usize, c: &Scalar) -> Option<FormMatrix> {
    let t = if n == 2 { c.clone() } else { c - &Scalar::one() };
    let two = Scalar::from_int(2);
    if t == two {
        return None;
    }
    let a = Scalar::from_int(rng.gen_range(1..=3));
    let b = Scalar::from_int(rng.gen_range(1..=3));
    let d = -&(&(&b * &b) * &(&(&t - &two) * &a).inv()?);
    let mut rows = vec![vec![a, b], vec![Scalar::zero(), d]];
    if n == 3 {
        for r in &mut rows {
            r.push(Scalar::zero());
        }
        rows.push(vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
    }
    let g = FormMatrix::new(Matrix::from_rows(rows).ok()?).ok()?;
    let m = random_invertible(rng, n, 2);
    g.congruent(&m).ok()
}

fn criterion_structure_maps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let opts = MapOptions::default();
    let mut pairs = 0;
    let mut maps_checked = 0;
    while pairs < 10 {
        let m = if pairs < 7 { 2 } else { 3 };
        let n = if pairs % 3 == 2 { 3 } else { 2 };
        let e = random_form(&mut rng, m);
        let c = trace_of_form(&e);
        let Some(f) = form_with_trace(&mut rng, n, &c) else { continue };
        ensure(trace_of_form(&f) == c, || "generated F misses the trace".into())?;
        for form in [&e, &f] {
            let h = hopf_data(form, &opts).map_err(|err| format!("hopf data: {err}"))?;
            ensure(h.all_certified(), || format!("Hopf maps/laws for {:?}", form.matrix().row_strings()))?;
            maps_checked += h.maps.len();
        }
        let g = structure_maps(&e, &f, &opts).map_err(|err| format!("structure maps: {err}"))?;
        ensure(g.delta_skipped.is_none(), || format!("delta skipped: {:?}", g.delta_skipped))?;
        ensure(g.unknown() == 0 && g.all_certified(), || {
            let bad: Vec<&str> = g
                .maps
                .iter()
                .filter(|x| !x.certificate.is_certified())
                .map(|x| x.name.as_str())
                .chain(g.identities.iter().filter(|i| !i.is_certified()).map(|i| i.name.as_str()))
                .chain(g.laws.iter().filter(|l| !l.holds).map(|l| l.name.as_str()))
                .collect();
            format!("pair {pairs} ({m}x{m}, {n}x{n}): not certified {bad:?}")
        })?;
        ensure(g.identities.iter().filter(|i| i.bound == 2).count() >= 2, || "generator identities missing".into())?;
        maps_checked += g.maps.len();
        pairs += 1;
    }
    Ok(format!("10 pairs, {maps_checked} maps certified, 0 Unknown"))
}

/// `U(k) (x) U(l)` by peeling off `U(1)`: `X (x) U(l) = X (x) U(l-1) (x) U(1) - X (x) U(l-2)`.
fn peel(k: u32, l: u32) -> BTreeMap<u32, i64> {
    let times_u1 = |x: &BTreeMap<u32, i64>| {
        let mut out = BTreeMap::new();
        for (&j, &m) in x {
            *out.entry(j + 1).or_insert(0) += m;
            if j > 0 {
                *out.entry(j - 1).or_insert(0) += m;
            }
        }
        out
    };
    let mut prev = BTreeMap::from([(k, 1i64)]);
    if l == 0 {
        return prev;
    }
    let mut cur = times_u1(&prev);
    for _ in 1..l {
        let mut next = times_u1(&cur);
        for (j, m) in &prev {
            *next.entry(*j).or_insert(0) -= m;
        }
        next.retain(|_, m| *m != 0);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

fn criterion_fusion() -> Outcome {
    let generic = FusionContext::generic();
    for k in 0..=20 {
        for l in 0..=20 {
            let Fusion::Decomposed(r) = tensor_decompose(SimpleLabel::u(k), SimpleLabel::u(l), &generic).map_err(|e| e.to_string())?
            else {
                return Err(format!("U{k} (x) U{l} not semisimple"));
            };
            let got: BTreeMap<u32, i64> = r.terms().map(|(x, m)| (x.u, m as i64)).collect();
            ensure(got == peel(k, l), || format!("U{k} (x) U{l}: {r}"))?;
            ensure(dim_of(&r) == SimpleLabel::u(k).dim() * SimpleLabel::u(l).dim(), || format!("dim of U{k} (x) U{l}"))?;
        }
    }
    let mut a = RepElement::simple(SimpleLabel::u(2));
    a.add(SimpleLabel::u(5), 2);
    let b = RepElement::simple(SimpleLabel::u(3)).sum(&RepElement::simple(SimpleLabel::u(1)));
    let ab = tensor_elements(&a, &b, &generic).map_err(|e| e.to_string())?;
    ensure(dim_of(&ab) == dim_of(&a) * dim_of(&b), || "dimension of a sum product".into())?;

    for order in 3..=10 {
        let ctx = FusionContext::root_of_unity(order).map_err(|e| e.to_string())?;
        let n0 = n0_of(order).map_err(|e| e.to_string())?;
        let want = vec![SimpleLabel::u(n0 - 2), SimpleLabel::v(1), SimpleLabel::u(n0 - 2)];
        match tensor_decompose(SimpleLabel::u(n0 - 1), SimpleLabel::u(1), &ctx).map_err(|e| e.to_string())? {
            Fusion::NonSemisimple(fr) => ensure(fr.factors == want, || format!("N={order}: {fr}"))?,
            Fusion::Decomposed(r) => return Err(format!("N={order}: decomposed as {r}")),
        }
        let report = fusion_contradiction_check(order).map_err(|e| e.to_string())?;
        ensure(report.factors_differ, || format!("N={order}: factors agree"))?;
    }
    Ok("peeling oracle k,l <= 20, dimensions, edge filtration and contradiction for N = 3..10".into())
}

fn criterion_genericity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut non_generic = std::collections::BTreeSet::new();
    for _ in 0..200 {
        let c = Scalar::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        // q + 1/q = -c
        let (q, _) = solve_sl2_parameter(&-&c).map_err(|e| e.to_string())?;
        let brute = (1..=12u32).find(|&k| q.pow(k as i64).is_one());
        let expect = match brute {
            Some(k) if k >= 3 => Genericity::RootOfUnity(k),
            _ => Genericity::Generic,
        };
        let got = classify_genericity(&q).map_err(|e| e.to_string())?;
        ensure(got == expect, || format!("c = {c}: {got:?} vs brute force {expect:?}"))?;
        if got != Genericity::Generic {
            non_generic.insert(c.to_string());
        }
    }
    let want: std::collections::BTreeSet<String> = ["-1", "0", "1"].iter().map(|s| s.to_string()).collect();
    ensure(non_generic == want, || format!("non-generic set {non_generic:?}"))?;
    Ok("200 traces agree with brute force; non-generic set {-1, 0, 1}".into())
}

fn criterion_congruence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for k in 0..50 {
        let n = 2 + k % 2;
        let e = random_form(&mut rng, n);
        let m = random_invertible(&mut rng, n, 2);
        let f = e.congruent(&m).map_err(|err| err.to_string())?;
        ensure(trace_invariant(&e) == trace_invariant(&f), || format!("pair {k}: traces differ"))?;
        let bare = congruence_invariants(&e, &f, None);
        ensure(!matches!(bare.verdict, CongruenceVerdict::NotCongruent { .. }), || format!("pair {k}: {:?}", bare.verdict))?;
        let with = congruence_invariants(&e, &f, Some(&m));
        ensure(with.verdict == CongruenceVerdict::CongruentWithWitness, || format!("pair {k}: {:?}", with.verdict))?;
        ensure(congruence_verify(&e, &f, &m) == Ok(true), || format!("pair {k}: witness rejected"))?;
    }
    Ok("50 congruent pairs: never NotCongruent, witness accepted, traces equal".into())
}

fn criterion_cqg() -> Outcome {
    let base = FieldTower::rationals_with_cap(3);
    let (_, i) = extend_with_root(&base, &Scalar::zero(), &Scalar::one(), "i").map_err(|e| e.to_string())?;
    let form = |m: Matrix| FormMatrix::new(m).map_err(|e| e.to_string());

    let r = cqg_verify(&form(Matrix::identity(2))?, &Matrix::identity(2)).map_err(|e| e.to_string())?;
    ensure(matches!(&r.cqg, CqgVerdict::Cqg { mu, .. } if mu.is_one()), || format!("(I, I): {:?}", r.cqg))?;

    let e1 = Matrix::from_ints(&[&[0, 1], &[-1, 0]]);
    let r = cqg_verify(&form(e1.clone())?, &e1.scale(&i)).map_err(|e| e.to_string())?;
    let lambda_ok = r.star.lambda.as_ref().is_some_and(|l| (l + &Scalar::one()).is_zero());
    ensure(r.star.holds() && lambda_ok, || format!("(E1, iE1): star {:?}", r.star))?;
    match &r.cqg {
        CqgVerdict::Cqg { mu, h, .. } => {
            ensure(h.scale(mu) == Matrix::identity(2).map(|x| x.lift_to(mu.tower())), || format!("mu H = {:?}", h.scale(mu).row_strings()))?
        }
        other => return Err(format!("(E1, iE1): {other:?}")),
    }

    let d = Matrix::diag(&[Scalar::one(), Scalar::from_int(-1)]);
    let r = cqg_verify(&form(d)?, &Matrix::identity(2)).map_err(|e| e.to_string())?;
    ensure(matches!(r.cqg, CqgVerdict::NotCqg(_)), || format!("(diag(1,-1), I): {:?}", r.cqg))?;
    Ok("(I,I) CQG mu=1; (E1,iE1) star with lambda=-1 and mu H = I; (diag(1,-1),I) NotCQG".into())
}

fn criterion_determinism() -> Outcome {
    let dir = env!("CARGO_MANIFEST_DIR");
    let args = ["bigalois", "tests/fixtures/e1.txt", "tests/fixtures/e1.txt", "--no-maps"];
    let run = || Command::new(env!("CARGO_BIN_EXE_bigalois")).current_dir(dir).args(args).output();
    let a = run().map_err(|e| e.to_string())?;
    let b = run().map_err(|e| e.to_string())?;
    ensure(a.status.code() == Some(0), || format!("exit {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, || "two runs differ".into())?;
    let golden = std::fs::read(format!("{dir}/tests/golden/bigalois_e1_e1.txt")).map_err(|e| e.to_string())?;
    ensure(a.stdout == golden, || "output differs from golden file".into())?;
    Ok(format!("two runs byte-identical ({} bytes) and equal to the golden file", a.stdout.len()))
}

fn main() {
    // The systems for 1-4 are shared; build them once.
    let systems = catch_unwind(build_systems);
    let systems = systems.as_ref().ok();
    let shared = |f: fn(&Systems) -> Outcome| -> Check<'_> {
        Box::new(move || systems.map_or_else(|| Err("building the random systems panicked".into()), f))
    };
    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("confluence of random systems", shared(criterion_confluence)),
        ("nonvanishing", shared(criterion_nonvanishing)),
        ("pinching against bounded quotient dimensions", shared(criterion_pinching)),
        ("redundant relation", shared(criterion_redundant)),
        ("structure maps", Box::new(criterion_structure_maps)),
        ("fusion engine", Box::new(criterion_fusion)),
        ("genericity", Box::new(criterion_genericity)),
        ("congruence invariants", Box::new(criterion_congruence)),
        ("CQG fixtures", Box::new(criterion_cqg)),
        ("determinism", Box::new(criterion_determinism)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
