//! Hopf structure of `B(E)` and the structure maps between `B(E)`, `B(F)`,
//! `B(E,F)` and `B(F,E)`, each certified through bounded membership.

use super::multitensor::MultiTensor;
use super::{
    build_be, build_bef_with, letter_matrix, poly_times, scalar_times, times_scalar, trace_of_form, transpose, BgError,
    PolyMatrix,
};
use crate::fpalg::{
    certify_morphism_with, membership_batch, opposite_presentation, tensor_presentation, Limits, MembershipVerdict,
    MorphismCertificate, MorphismSpec, Presentation, Variance,
};
use crate::freealg::{NcPoly, Word};
use crate::matrix::{FormMatrix, Matrix, MatrixError};
use crate::scalars::{solve_sl2_parameter, Scalar};

#[derive(Debug, Clone)]
pub struct MapOptions {
    /// Membership bound for morphism certification.
    pub bound: usize,
    /// Congruence data `(P, Q)` for the transport map; unipotent defaults when absent.
    pub psi: Option<(Matrix, Matrix)>,
    pub limits: Limits,
}

impl Default for MapOptions {
    fn default() -> Self {
        MapOptions { bound: 4, psi: None, limits: Limits::default() }
    }
}

#[derive(Debug, Clone)]
pub struct MapEntry {
    pub name: String,
    pub formula: String,
    pub source: String,
    pub target: String,
    pub variance: Variance,
    pub certificate: MorphismCertificate,
}

/// A family of elements that must lie in an ideal.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub presentation: String,
    pub bound: usize,
    pub verdicts: Vec<MembershipVerdict>,
}

impl IdentityCheck {
    pub fn is_certified(&self) -> bool {
        self.verdicts.iter().all(MembershipVerdict::is_member)
    }

    pub fn unknown(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.is_member()).count()
    }
}

/// An identity checked by exact comparison, with no membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct HopfData {
    pub presentation: Presentation,
    /// Coproduct, counit and antipode.
    pub maps: Vec<MapEntry>,
    pub laws: Vec<LawCheck>,
    /// `ta E a - E` lies in the ideal.
    pub comodule_form: IdentityCheck,
}

impl HopfData {
    pub fn all_certified(&self) -> bool {
        self.maps.iter().all(|m| m.certificate.is_certified())
            && self.laws.iter().all(|l| l.holds)
            && self.comodule_form.is_certified()
    }
}

#[derive(Debug, Clone)]
pub struct GaloisMaps {
    pub maps: Vec<MapEntry>,
    pub identities: Vec<IdentityCheck>,
    pub laws: Vec<LawCheck>,
    /// Why the map into `B(E,E_q) (x) B(E_q,F)` was not built, if it was not.
    pub delta_skipped: Option<String>,
}

impl GaloisMaps {
    pub fn all_certified(&self) -> bool {
        self.maps.iter().all(|m| m.certificate.is_certified())
            && self.identities.iter().all(IdentityCheck::is_certified)
            && self.laws.iter().all(|l| l.holds)
    }

    pub fn map(&self, name: &str) -> Option<&MapEntry> {
        self.maps.iter().find(|m| m.name == name)
    }

    pub fn unknown(&self) -> usize {
        self.maps.iter().map(|m| m.certificate.unknown()).sum::<usize>()
            + self.identities.iter().map(IdentityCheck::unknown).sum::<usize>()
    }
}

/// Images `x(i,j) -> sum_k l(i,k) (x) r(k,j)` with `l` of shape `rows x inner`
/// and `r` of shape `inner x cols` starting at letter `offset`.
fn pair_images(rows: usize, inner: usize, cols: usize, offset: u32) -> Vec<NcPoly> {
    (0..rows)
        .flat_map(|i| {
            (0..cols).map(move |j| {
                let mut f = NcPoly::zero();
                for k in 0..inner {
                    let w = Word::from_letters(&[(i * inner + k) as u32, offset + (k * cols + j) as u32]);
                    f.add_term(w, &Scalar::one());
                }
                f
            })
        })
        .collect()
}

fn pair_tensors(rows: usize, inner: usize, cols: usize) -> Vec<MultiTensor> {
    (0..rows)
        .flat_map(|i| {
            (0..cols).map(move |j| {
                MultiTensor::sum_of_pairs((0..inner).map(|k| ((i * inner + k) as u32, (k * cols + j) as u32)))
            })
        })
        .collect()
}

fn counit_tensors(n: usize) -> Vec<MultiTensor> {
    (0..n * n).map(|x| if x / n == x % n { MultiTensor::unit(0) } else { MultiTensor::zero(0) }).collect()
}

fn letters(count: usize) -> Vec<MultiTensor> {
    (0..count as u32).map(|x| MultiTensor::pure(vec![Word::letter(x)], Scalar::one())).collect()
}

fn flatten(m: &PolyMatrix) -> Vec<NcPoly> {
    m.iter().flat_map(|row| row.iter().cloned()).collect()
}

fn shift(f: &NcPoly, by: u32) -> NcPoly {
    f.map_letters(|x| x + by)
}

fn entry(
    name: &str,
    formula: &str,
    source: &Presentation,
    target: &Presentation,
    images: Vec<NcPoly>,
    variance: Variance,
    opts: &MapOptions,
) -> Result<MapEntry, BgError> {
    let spec = MorphismSpec::new(name, source.clone(), target.clone(), images, variance)?;
    let certificate = certify_morphism_with(&spec, opts.bound, opts.limits)?;
    Ok(MapEntry {
        name: name.into(),
        formula: formula.into(),
        source: source.name().into(),
        target: target.name().into(),
        variance,
        certificate,
    })
}

fn identity(name: &str, p: &Presentation, fs: &[NcPoly], bound: usize, limits: Limits) -> Result<IdentityCheck, BgError> {
    Ok(IdentityCheck {
        name: name.into(),
        presentation: p.name().into(),
        bound,
        verdicts: membership_batch(p, fs, bound, limits)?,
    })
}

/// Coproduct, counit and antipode of `B(E)`, certified, plus the coalgebra
/// laws on generators and the invariance of the form `E`.
pub fn hopf_data(e: &FormMatrix, opts: &MapOptions) -> Result<HopfData, BgError> {
    let m = e.size();
    let be = build_be(e)?;
    let mm = (m * m) as u32;
    let square = tensor_presentation(&be, &be);
    let delta = entry("Delta", "a(i,j) -> sum_k a(i,k) (x) a(k,j)", &be, &square, pair_images(m, m, m, mm), Variance::Morphism, opts)?;
    let counit_images = (0..m * m)
        .map(|x| if x / m == x % m { NcPoly::one() } else { NcPoly::zero() })
        .collect();
    let counit = entry("epsilon", "a(i,j) -> delta(i,j)", &be, &Presentation::ground_field(), counit_images, Variance::Morphism, opts)?;
    let a = letter_matrix(m, m, 0);
    let s_images = flatten(&times_scalar(&scalar_times(e.inverse(), &transpose(&a)), e.matrix()));
    let antipode =
        entry("S", "a -> E^-1 ta E", &be, &opposite_presentation(&be), s_images, Variance::Morphism, opts)?;

    let dt = pair_tensors(m, m, m);
    let eps = counit_tensors(m);
    let gens = letters(m * m);
    let laws = vec![
        LawCheck { name: "(Delta (x) id) Delta = (id (x) Delta) Delta".into(), holds: dt.iter().all(|d| d.apply_at(0, &dt) == d.apply_at(1, &dt)) },
        LawCheck {
            name: "(epsilon (x) id) Delta = id = (id (x) epsilon) Delta".into(),
            holds: dt.iter().zip(&gens).all(|(d, g)| &d.apply_at(0, &eps) == g && &d.apply_at(1, &eps) == g),
        },
    ];
    let form = poly_times(&times_scalar(&transpose(&a), e.matrix()), &a);
    let form_queries: Vec<NcPoly> = form
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, f)| f - &NcPoly::constant(e.get(i, j).clone())))
        .collect();
    let comodule_form = identity("ta E a - E", &be, &form_queries, 2, opts.limits)?;
    Ok(HopfData { presentation: be, maps: vec![delta, counit, antipode], laws, comodule_form })
}

fn unipotent(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| if i <= j { Scalar::one() } else { Scalar::zero() })
}

/// The coactions, the anti-isomorphism, the Galois maps and the transport
/// map, certified at `opts.bound`; the map into `B(E,E_q) (x) B(E_q,F)` is
/// added when the two traces agree.
pub fn structure_maps(e: &FormMatrix, f: &FormMatrix, opts: &MapOptions) -> Result<GaloisMaps, BgError> {
    let (m, n) = (e.size(), f.size());
    let (mm, mn) = ((m * m) as u32, (m * n) as u32);
    let be = build_bef_with(e, e, "a", "B(E)")?;
    let bf = build_bef_with(f, f, "b", "B(F)")?;
    let bef = build_bef_with(e, f, "z", "B(E,F)")?;
    let bfe = build_bef_with(f, e, "y", "B(F,E)")?;
    let mut maps = Vec::new();

    maps.push(entry("alpha", "z(i,j) -> sum_k a(i,k) (x) z(k,j)", &bef, &tensor_presentation(&be, &bef), pair_images(m, m, n, mm), Variance::Morphism, opts)?);
    maps.push(entry("beta", "z(i,j) -> sum_k z(i,k) (x) b(k,j)", &bef, &tensor_presentation(&bef, &bf), pair_images(m, n, n, mn), Variance::Morphism, opts)?);
    let z = letter_matrix(m, n, 0);
    let phi = times_scalar(&scalar_times(f.inverse(), &transpose(&z)), e.matrix());
    maps.push(entry("phi", "y -> F^-1 tz E (into the opposite algebra)", &bfe, &bef, flatten(&phi), Variance::AntiMorphism, opts)?);
    maps.push(entry("gamma1", "a(i,j) -> sum_k z(i,k) (x) y(k,j)", &be, &tensor_presentation(&bef, &bfe), pair_images(m, n, m, mn), Variance::Morphism, opts)?);
    maps.push(entry("gamma2", "b(i,j) -> sum_k y(i,k) (x) z(k,j)", &bf, &tensor_presentation(&bfe, &bef), pair_images(n, m, n, mn), Variance::Morphism, opts)?);

    let (p, q) = opts.psi.clone().unwrap_or_else(|| (unipotent(m), unipotent(n)));
    let (psi, psi_inv, psi_law) = transport_maps(e, f, &p, &q, "B(tPEP,tQFQ)", opts)?;
    maps.push(psi);
    maps.push(psi_inv);
    let c_e = trace_of_form(e);
    let c_f = trace_of_form(f);
    let delta_skipped = if c_e == c_f {
        let (qv, _) = solve_sl2_parameter(&c_e)?;
        maps.push(delta_map(e, f, &qv, opts)?);
        None
    } else {
        Some(format!("traces differ: {c_e} vs {c_f}"))
    };

    // kernel identities: sum_k phi(y_lk) z_kj = delta_lj and sum_k z_lk phi(y_kj) = delta_lj
    let phi_z = poly_times(&phi, &z);
    let z_phi = poly_times(&z, &phi);
    let minus_id = |mat: &PolyMatrix| super::minus_identity(mat);
    let mut identities = vec![
        identity("sum_k phi(y(l,k)) z(k,j) = delta(l,j)", &bef, &minus_id(&phi_z), 2, opts.limits)?,
        identity("sum_k z(l,k) phi(y(k,j)) = delta(l,j)", &bef, &minus_id(&z_phi), 2, opts.limits)?,
    ];
    let composite_bound = opts.bound.max(3);
    let zz = tensor_presentation(&bef, &bef);
    let eta_l_kappa_l: Vec<NcPoly> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut acc = -&z[i][j];
            for l in 0..n {
                acc = &acc + &(&z[i][l] * &shift(&phi_z[l][j], mn));
            }
            acc
        })
        .collect();
    identities.push(identity("eta_l kappa_l (z(i,j) (x) 1) = z(i,j) (x) 1", &zz, &eta_l_kappa_l, composite_bound, opts.limits)?);
    let a = letter_matrix(m, m, 0);
    let kappa_l_eta_l: Vec<NcPoly> = (0..m)
        .flat_map(|i| (0..m).map(move |k| (i, k)))
        .map(|(i, k)| {
            let mut acc = -&a[i][k];
            for p in 0..m {
                acc = &acc + &(&a[i][p] * &shift(&z_phi[p][k], mm));
            }
            acc
        })
        .collect();
    identities.push(identity("kappa_l eta_l (a(i,k) (x) 1) = a(i,k) (x) 1", &tensor_presentation(&be, &bef), &kappa_l_eta_l, composite_bound, opts.limits)?);
    let b = letter_matrix(n, n, mn);
    let kappa_r_eta_r: Vec<NcPoly> = (0..n)
        .flat_map(|j| (0..n).map(move |l| (j, l)))
        .map(|(j, l)| {
            let mut acc = -&b[j][l];
            for p in 0..n {
                acc = &acc + &(&phi_z[j][p] * &b[p][l]);
            }
            acc
        })
        .collect();
    identities.push(identity("kappa_r eta_r (1 (x) b(j,l)) = 1 (x) b(j,l)", &tensor_presentation(&bef, &bf), &kappa_r_eta_r, composite_bound, opts.limits)?);
    let eta_r_kappa_r: Vec<NcPoly> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut acc = -&shift(&z[i][j], mn);
            for p in 0..m {
                acc = &acc + &(&z_phi[i][p] * &shift(&z[p][j], mn));
            }
            acc
        })
        .collect();
    identities.push(identity("eta_r kappa_r (1 (x) z(i,j)) = 1 (x) z(i,j)", &zz, &eta_r_kappa_r, composite_bound, opts.limits)?);

    let delta_e = pair_tensors(m, m, m);
    let delta_f = pair_tensors(n, n, n);
    let alpha = pair_tensors(m, m, n);
    let beta = pair_tensors(m, n, n);
    let gens = letters(m * n);
    let laws = vec![
        LawCheck {
            name: "(Delta (x) id) alpha = (id (x) alpha) alpha".into(),
            holds: alpha.iter().all(|x| x.apply_at(0, &delta_e) == x.apply_at(1, &alpha)),
        },
        LawCheck {
            name: "(epsilon (x) id) alpha = id".into(),
            holds: alpha.iter().zip(&gens).all(|(x, g)| &x.apply_at(0, &counit_tensors(m)) == g),
        },
        LawCheck {
            name: "(id (x) Delta) beta = (beta (x) id) beta".into(),
            holds: beta.iter().all(|x| x.apply_at(1, &delta_f) == x.apply_at(0, &beta)),
        },
        LawCheck {
            name: "(id (x) epsilon) beta = id".into(),
            holds: beta.iter().zip(&gens).all(|(x, g)| &x.apply_at(1, &counit_tensors(n)) == g),
        },
        LawCheck {
            name: "(alpha (x) id) beta = (id (x) beta) alpha".into(),
            holds: beta.iter().zip(&alpha).all(|(b, a)| b.apply_at(0, &alpha) == a.apply_at(1, &beta)),
        },
        psi_law,
    ];
    Ok(GaloisMaps { maps, identities, laws, delta_skipped })
}

/// `psi: z -> P y Q^-1` from `B(E,F)` onto `B(tPEP, tQFQ)` and its inverse
/// `y -> P^-1 z Q`, with the exact check that they compose to the identity.
pub(crate) fn transport_maps(
    e: &FormMatrix,
    f: &FormMatrix,
    p: &Matrix,
    q: &Matrix,
    target_name: &str,
    opts: &MapOptions,
) -> Result<(MapEntry, MapEntry, LawCheck), BgError> {
    let (m, n) = (e.size(), f.size());
    let pinv = p.inverse().ok_or(MatrixError::Singular)?;
    let qinv = q.inverse().ok_or(MatrixError::Singular)?;
    let bef = build_bef_with(e, f, "z", "B(E,F)")?;
    let moved = build_bef_with(&e.congruent(p)?, &f.congruent(q)?, "y", target_name)?;
    let psi_images = flatten(&scalar_times(p, &times_scalar(&letter_matrix(m, n, 0), &qinv)));
    let inv_images = flatten(&scalar_times(&pinv, &times_scalar(&letter_matrix(m, n, 0), q)));
    let law = LawCheck {
        name: "psi_inverse psi = id and psi psi_inverse = id on generators".into(),
        holds: (0..m * n).all(|x| {
            let g = NcPoly::letter(x as u32);
            psi_images[x].substitute(&inv_images, false) == g && inv_images[x].substitute(&psi_images, false) == g
        }),
    };
    let psi = entry("psi", "z -> P y Q^-1", &bef, &moved, psi_images, Variance::Morphism, opts)?;
    let psi_inv = entry("psi_inverse", "y -> P^-1 z Q", &moved, &bef, inv_images, Variance::Morphism, opts)?;
    Ok((psi, psi_inv, law))
}

/// `delta: z(i,j) -> sum_k v(i,k) (x) w(k,j)` into `B(E,E_q) (x) B(E_q,F)`.
pub(crate) fn delta_map(e: &FormMatrix, f: &FormMatrix, q: &Scalar, opts: &MapOptions) -> Result<MapEntry, BgError> {
    let (m, n) = (e.size(), f.size());
    let eq = FormMatrix::e_q(q)?;
    let bef = build_bef_with(e, f, "z", "B(E,F)")?;
    let left = build_bef_with(e, &eq, "v", "B(E,E_q)")?;
    let right = build_bef_with(&eq, f, "w", "B(E_q,F)")?;
    let target = tensor_presentation(&left, &right);
    entry("delta", "z(i,j) -> sum_k v(i,k) (x) w(k,j)", &bef, &target, pair_images(m, 2, n, (2 * m) as u32), Variance::Morphism, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> FormMatrix {
        FormMatrix::new(Matrix::from_ints(rows)).unwrap()
    }

    #[test]
    fn hopf_structure_of_random_form() {
        let e = ints(&[&[2, 1], &[-1, 3]]);
        let h = hopf_data(&e, &MapOptions::default()).unwrap();
        for m in &h.maps {
            assert!(m.certificate.is_certified(), "{} not certified", m.name);
        }
        assert!(h.all_certified());
        // counit kills every relation outright
        assert!(h.maps[1].certificate.checks.iter().all(|c| c.image.is_zero()));
    }

    #[test]
    fn structure_maps_for_congruent_pair() {
        let e = ints(&[&[1, 2], &[0, 1]]);
        let m = Matrix::from_ints(&[&[1, 1], &[1, 2]]);
        let f = e.congruent(&m).unwrap();
        let g = structure_maps(&e, &f, &MapOptions::default()).unwrap();
        assert!(g.delta_skipped.is_none());
        for entry in &g.maps {
            assert!(entry.certificate.is_certified(), "{} not certified", entry.name);
        }
        for id in &g.identities {
            assert!(id.is_certified(), "{} not certified", id.name);
        }
        assert!(g.laws.iter().all(|l| l.holds));
        assert_eq!(g.identities[0].verdicts.iter().filter(|v| matches!(v, MembershipVerdict::CertifiedMember { bound: 2, .. })).count(), 4);
    }

    #[test]
    fn delta_needs_equal_traces() {
        let e = ints(&[&[1, 0], &[0, 1]]);
        let f = ints(&[&[0, 1], &[-1, 0]]);
        let g = structure_maps(&e, &f, &MapOptions::default()).unwrap();
        assert!(g.delta_skipped.is_some());
        assert!(g.map("delta").is_none());
    }
}
