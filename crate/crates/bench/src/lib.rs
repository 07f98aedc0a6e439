//! Fixed inputs shared by the benchmarks.

use bigalois_core::bgalois::{build_bef_with, build_sl2_rewrite_system, normalize_form, redundant_relation, trace_of_form};
use bigalois_core::fpalg::Presentation;
use bigalois_core::freealg::NcPoly;
use bigalois_core::matrix::{FormMatrix, Matrix};
use bigalois_core::rewrite::RewriteSystem;
use bigalois_core::scalars::solve_sl2_parameter;

/// A normalized `n x n` form with no zero entries, for `n` in 2..=4.
pub fn sample_form(n: usize) -> FormMatrix {
    let m = Matrix::from_fn(n, n, |i, j| {
        let v = (3 * i + 5 * j + 1) % 7 + 1;
        bigalois_core::scalars::Scalar::from_int(if i > j { -(v as i64) } else { v as i64 })
    });
    FormMatrix::new(m).expect("sample form is invertible")
}

pub struct Workload {
    pub system: RewriteSystem,
    pub presentation: Presentation,
    pub redundant: NcPoly,
}

/// The rewrite system, presentation `B(E_q, F')` and redundant relation for `sample_form(n)`.
pub fn workload(n: usize) -> Workload {
    let f = sample_form(n);
    let (q, _) = solve_sl2_parameter(&trace_of_form(&f)).expect("parameter");
    let fp = normalize_form(&f, q.tower()).expect("normalization").normalized;
    let eq = FormMatrix::e_q(&q).expect("E_q");
    Workload {
        system: build_sl2_rewrite_system(&q, &fp).expect("rewrite system"),
        presentation: build_bef_with(&eq, &fp, "z", "B(E_q,F')").expect("presentation"),
        redundant: redundant_relation(&fp),
    }
}
