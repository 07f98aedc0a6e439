//! Square roots, quadratic roots, tower extension and root-of-unity tests.

use super::{FieldTower, Scalar, ScalarError};
use num::{BigInt, BigRational, Signed};
use std::sync::Arc;

/// Largest order tried by [`classify_genericity`]. Every root of unity of
/// degree at most 8 over the rationals has order at most 30.
pub const MAX_ROOT_OF_UNITY_ORDER: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Genericity {
    Generic,
    RootOfUnity(u32),
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

/// Square root of `a` using only the first `h` levels of its tower.
pub(super) fn sqrt_in(a: &Scalar, h: usize) -> Option<Scalar> {
    if h == 0 {
        return rational_sqrt(a.to_rational().as_ref()?).map(|q| Scalar::rational_in(a.tower(), q));
    }
    if a.effective_height() > h {
        return None;
    }
    let tower = a.tower().clone();
    let level = tower.levels()[h - 1].clone();
    let (p, _) = level.min_poly();
    let disc = level.discriminant();
    let two = Scalar::from_int(2);
    let theta = tower.generator(h - 1);
    // delta = 2 theta + p squares to the discriminant; write a = A + B delta.
    let delta = &(&two * &theta) + p;
    let (a0, a1) = a.split_at_level(h);
    let big_b = &a1 / &two;
    let big_a = &a0 - &(&big_b * p);
    if big_b.is_zero() {
        if let Some(s) = sqrt_in(&big_a, h - 1) {
            return Some(s);
        }
        return sqrt_in(&(&big_a / &disc), h - 1).map(|t| &t * &delta);
    }
    let norm = &(&big_a * &big_a) - &(&(&big_b * &big_b) * &disc);
    let s = sqrt_in(&norm, h - 1)?;
    for s in [s.clone(), -s] {
        let half = &(&big_a + &s) / &two;
        if let Some(x) = sqrt_in(&half, h - 1) {
            if x.is_zero() {
                continue;
            }
            let y = &big_b / &(&two * &x);
            return Some(&x + &(&y * &delta));
        }
    }
    None
}

/// Both roots of `x^2 + p x + r` when they lie in the tower, preferred root first.
///
/// Rational roots are ordered by larger absolute value, ties to the positive one.
pub fn quadratic_roots(p: &Scalar, r: &Scalar) -> Option<(Scalar, Scalar)> {
    let disc = &(p * p) - &(&Scalar::from_int(4) * r);
    let s = disc.sqrt()?;
    let two = Scalar::from_int(2);
    let x1 = &(&s - p) / &two;
    let x2 = &(&(-&s) - p) / &two;
    if let (Some(a), Some(b)) = (x1.to_rational(), x2.to_rational()) {
        let swap = match b.abs().cmp(&a.abs()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => b.is_positive(),
            std::cmp::Ordering::Less => false,
        };
        if swap {
            return Some((x2, x1));
        }
    }
    Some((x1, x2))
}

/// A root of `x^2 + p x + r`, extending `t` when the polynomial is irreducible.
///
/// Irreducible polynomials whose discriminant is minus a square become the
/// Gaussian level `i` (when absent); others adjoin a level named after `name`.
pub fn extend_with_root(
    t: &Arc<FieldTower>,
    p: &Scalar,
    r: &Scalar,
    name: &str,
) -> Result<(Arc<FieldTower>, Scalar), ScalarError> {
    let t = FieldTower::join(&FieldTower::join(t, p.tower())?, r.tower())?;
    let p = p.lift_to(&t);
    let r = r.lift_to(&t);
    if let Some((root, _)) = quadratic_roots(&p, &r) {
        return Ok((t, root));
    }
    let disc = &(&p * &p) - &(&Scalar::from_int(4) * &r);
    if !t.has_gaussian() {
        if let Some(s) = (-&disc).sqrt() {
            let t2 = t.adjoin("i", &Scalar::zero(), &Scalar::one())?;
            let i = t2.generator(t2.height() - 1);
            let root = &(&(&s * &i) - &p) / &Scalar::from_int(2);
            return Ok((t2, root));
        }
    }
    let t2 = t.adjoin(&t.fresh_name(name), &p, &r)?;
    let root = t2.generator(t2.height() - 1);
    Ok((t2, root))
}

/// Solves `q^2 + c q + 1 = 0`; returns `(q, q^-1)`.
pub fn solve_sl2_parameter(c: &Scalar) -> Result<(Scalar, Scalar), ScalarError> {
    let (_, q) = extend_with_root(c.tower(), c, &Scalar::one(), "q")?;
    let q_inv = &(-c) - &q;
    debug_assert!((&q * &q_inv).is_one());
    Ok((q, q_inv))
}

/// `RootOfUnity(N)` when `q^N = 1` for a minimal `N >= 3`, otherwise `Generic`.
pub fn classify_genericity(q: &Scalar) -> Result<Genericity, ScalarError> {
    if q.is_zero() {
        return Err(ScalarError::ZeroParameter);
    }
    let mut power = q.clone();
    for n in 1..=MAX_ROOT_OF_UNITY_ORDER {
        if power.is_one() {
            return Ok(if n <= 2 { Genericity::Generic } else { Genericity::RootOfUnity(n) });
        }
        power = &power * q;
    }
    Ok(Genericity::Generic)
}
