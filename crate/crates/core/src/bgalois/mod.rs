//! The algebras `B(E)` and `B(E,F)`, their structure maps, the quantum
//! SL(2) rewrite system and the end-to-end bigalois certificate.

mod certificate;
mod maps;
mod multitensor;

pub use certificate::{
    bigalois_certificate, BigaloisCertificate, CertOptions, DeltaRoute, Nonvanishing, RedundantRelation, StageFailure,
};
pub use maps::{hopf_data, structure_maps, GaloisMaps, HopfData, IdentityCheck, LawCheck, MapEntry, MapOptions};
pub use multitensor::MultiTensor;

use crate::fpalg::{FpError, Presentation};
use crate::freealg::{Alphabet, NcPoly, Word};
use crate::matrix::{FormMatrix, Matrix, MatrixError};
use crate::rewrite::{RewriteError, RewriteSystem, Rule};
use crate::scalars::{extend_with_root, FieldTower, Scalar, ScalarError};
use std::sync::Arc;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum BgError {
    #[error("matrix size {0} is below 2")]
    TooSmall(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Matrix of noncommutative polynomials.
pub(crate) type PolyMatrix = Vec<Vec<NcPoly>>;

/// `rows x cols` letters `sym[i,j]`, numbered row-major from `offset`.
pub(crate) fn letter_matrix(rows: usize, cols: usize, offset: u32) -> PolyMatrix {
    (0..rows).map(|i| (0..cols).map(|j| NcPoly::letter(offset + (i * cols + j) as u32)).collect()).collect()
}

pub(crate) fn transpose(a: &PolyMatrix) -> PolyMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub(crate) fn scalar_times(s: &Matrix, a: &PolyMatrix) -> PolyMatrix {
    (0..s.rows())
        .map(|i| {
            (0..a[0].len())
                .map(|j| {
                    let mut acc = NcPoly::zero();
                    for k in 0..s.cols() {
                        if !s[(i, k)].is_zero() {
                            acc = &acc + &a[k][j].scale(&s[(i, k)]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub(crate) fn times_scalar(a: &PolyMatrix, s: &Matrix) -> PolyMatrix {
    (0..a.len())
        .map(|i| {
            (0..s.cols())
                .map(|j| {
                    let mut acc = NcPoly::zero();
                    for k in 0..s.rows() {
                        if !s[(k, j)].is_zero() {
                            acc = &acc + &a[i][k].scale(&s[(k, j)]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub(crate) fn poly_times(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    let mut acc = NcPoly::zero();
                    for k in 0..b.len() {
                        acc = &acc + &(&a[i][k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub(crate) fn minus_identity(a: &PolyMatrix) -> Vec<NcPoly> {
    a.iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter().enumerate().map(move |(j, p)| if i == j { p - &NcPoly::one() } else { p.clone() })
        })
        .collect()
}

fn check_size(e: &FormMatrix) -> Result<(), BgError> {
    if e.size() < 2 {
        return Err(BgError::TooSmall(e.size()));
    }
    Ok(())
}

/// `B(E,F)` on letters `sym[i,j]`: the entries of `F^-1 tz E z - I_n`,
/// then those of `z F^-1 tz E - I_m`, row-major.
pub fn build_bef_with(e: &FormMatrix, f: &FormMatrix, sym: &str, name: &str) -> Result<Presentation, BgError> {
    check_size(e)?;
    check_size(f)?;
    let (m, n) = (e.size(), f.size());
    let z = letter_matrix(m, n, 0);
    let zt = transpose(&z);
    let left = scalar_times(f.inverse(), &poly_times(&times_scalar(&zt, e.matrix()), &z));
    let right = times_scalar(&poly_times(&times_scalar(&z, f.inverse()), &zt), e.matrix());
    let mut relations = minus_identity(&left);
    relations.extend(minus_identity(&right));
    Ok(Presentation::new(name, Alphabet::matrix(sym, m, n), relations)?)
}

pub fn build_bef(e: &FormMatrix, f: &FormMatrix) -> Result<Presentation, BgError> {
    build_bef_with(e, f, "z", "B(E,F)")
}

/// `B(E)` on letters `a[i,j]`: `E^-1 ta E a = I = a E^-1 ta E`.
pub fn build_be(e: &FormMatrix) -> Result<Presentation, BgError> {
    build_bef_with(e, e, "a", "B(E)")
}

/// `tr(E tE^-1)`.
pub fn trace_of_form(e: &FormMatrix) -> Scalar {
    e.matrix().mul(&e.inverse().transpose()).trace()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum NormalizationKind {
    /// `(F^-1)_nn` was already zero.
    Skipped,
    /// `(F^-1)_11 = 0`: reverse the basis.
    Antidiagonal,
    /// `P = sum_{i<n} E_ii + lambda E_nn + E_1n`.
    Lambda,
}

#[derive(Debug, Clone)]
pub struct Normalization {
    pub kind: NormalizationKind,
    pub p: Matrix,
    pub lambda: Option<Scalar>,
    /// `P^-1 F tP^-1`, whose inverse has a zero bottom-right entry.
    pub normalized: FormMatrix,
}

/// Finds `P` with `(tP F^-1 P)_nn = 0`, extending `tower` for `lambda` if needed.
pub fn normalize_form(f: &FormMatrix, tower: &Arc<FieldTower>) -> Result<Normalization, BgError> {
    check_size(f)?;
    let n = f.size();
    let m = f.inverse();
    let (kind, p, lambda) = if m[(n - 1, n - 1)].is_zero() {
        (NormalizationKind::Skipped, Matrix::identity(n), None)
    } else if m[(0, 0)].is_zero() {
        let p = Matrix::from_fn(n, n, |i, j| if i + j == n - 1 { Scalar::one() } else { Scalar::zero() });
        (NormalizationKind::Antidiagonal, p, None)
    } else {
        let mnn = &m[(n - 1, n - 1)];
        let lin = &(&m[(n - 1, 0)] + &m[(0, n - 1)]) / mnn;
        let cst = &m[(0, 0)] / mnn;
        let (_, lambda) = extend_with_root(tower, &lin, &cst, "w")?;
        let mut p = Matrix::identity(n);
        p[(n - 1, n - 1)] = lambda.clone();
        p[(0, n - 1)] = Scalar::one();
        (NormalizationKind::Lambda, p, Some(lambda))
    };
    let pinv = p.inverse().ok_or(MatrixError::Singular)?;
    let normalized = FormMatrix::new(pinv.mul(f.matrix()).mul(&pinv.transpose()))?;
    if !normalized.inv_get(n - 1, n - 1).is_zero() {
        return Err(BgError::Precondition("normalization left a nonzero corner".into()));
    }
    Ok(Normalization { kind, p, lambda, normalized })
}

/// Letter index of `z[i,j]` (1-based) in the `2 x n` alphabet.
fn zl(n: usize, i: usize, j: usize) -> u32 {
    ((i - 1) * n + (j - 1)) as u32
}

fn word2(a: u32, b: u32) -> Word {
    Word::from_letters(&[a, b])
}

/// The position `(n, v)` of the last nonzero entry of `F^-1`.
pub fn pivot_position(f: &FormMatrix) -> Result<usize, BgError> {
    let n = f.size();
    let (u, v) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .rfind(|&(i, j)| !f.inv_get(i, j).is_zero())
        .expect("invertible matrix has a nonzero entry");
    if u != n - 1 || v == n - 1 {
        return Err(BgError::Precondition(format!("need (F^-1)_nn = 0; last nonzero entry at ({}, {})", u + 1, v + 1)));
    }
    Ok(v + 1)
}

/// The reduction system presenting `B(E_q, F)` when `(F^-1)_nn = 0`.
pub fn build_sl2_rewrite_system(q: &Scalar, f: &FormMatrix) -> Result<RewriteSystem, BgError> {
    check_size(f)?;
    let n = f.size();
    let c = trace_of_form(f);
    if !(&(&(q * q) + &(&c * q)) + &Scalar::one()).is_zero() {
        return Err(BgError::Precondition(format!("q = {q} does not solve q^2 + ({c}) q + 1 = 0")));
    }
    let v = pivot_position(f)?;
    let alpha = |i: usize, j: usize| f.get(i - 1, j - 1).clone();
    let beta = |i: usize, j: usize| f.inv_get(i - 1, j - 1).clone();
    let mut rules = Vec::with_capacity(n * n + 3);
    for i in 1..=n {
        for j in 1..=n {
            let mut rhs = NcPoly::monomial(word2(zl(n, 1, i), zl(n, 2, j)), q.clone());
            rhs.add_term(Word::empty(), &-&(q * &alpha(i, j)));
            rules.push(Rule { lhs: word2(zl(n, 2, i), zl(n, 1, j)), rhs });
        }
    }
    let scale = -beta(n, v).inv().expect("pivot is nonzero");
    let tail = |a: usize, b: usize| {
        let mut acc = NcPoly::zero();
        for i in 1..=n {
            for j in 1..=n {
                if (i, j) < (n, v) {
                    acc.add_term(word2(zl(n, a, i), zl(n, b, j)), &(&beta(i, j) * &scale));
                }
            }
        }
        acc
    };
    rules.push(Rule { lhs: word2(zl(n, 1, n), zl(n, 1, v)), rhs: tail(1, 1) });
    let mut mid = tail(1, 2);
    mid.add_term(Word::empty(), &(q * &scale));
    rules.push(Rule { lhs: word2(zl(n, 1, n), zl(n, 2, v)), rhs: mid });
    rules.push(Rule { lhs: word2(zl(n, 2, n), zl(n, 2, v)), rhs: tail(2, 2) });
    Ok(RewriteSystem::new(Alphabet::matrix("z", 2, n), rules)?)
}

/// `sum beta_ij z[2,i] z[1,j] - 1`, the relation the reduction system omits.
pub fn redundant_relation(f: &FormMatrix) -> NcPoly {
    let n = f.size();
    let mut out = NcPoly::constant(-Scalar::one());
    for i in 1..=n {
        for j in 1..=n {
            out.add_term(word2(zl(n, 2, i), zl(n, 1, j)), f.inv_get(i - 1, j - 1));
        }
    }
    out
}
