//! Complex conjugation and real signs.
//!
//! Real quadratic levels (conjugation-fixed coefficients, positive
//! discriminant) are embedded with the generator equal to the larger real
//! root `(-p + sqrt(D)) / 2`. Levels with negative discriminant, and the
//! Gaussian level, are sent to their other root by conjugation.

use super::{rational_sign, FieldTower, LevelKind, Scalar, ScalarError};
use std::cmp::Ordering;
use std::sync::Arc;

fn level_is_real(tower: &Arc<FieldTower>, k: usize) -> Result<bool, ScalarError> {
    let level = &tower.levels()[k];
    if level.kind() == LevelKind::Gaussian {
        return Ok(false);
    }
    let stable = |x: &Scalar| conj_at(x, k).map(|c| c == *x).unwrap_or(false);
    let (p, r) = level.min_poly();
    if !stable(p) || !stable(r) {
        return Err(ScalarError::NotConjugationStable(level.name().to_string()));
    }
    match sign_at(&level.discriminant(), k) {
        Some(Ordering::Greater) => Ok(true),
        Some(Ordering::Less) => Ok(false),
        _ => Err(ScalarError::NotConjugationStable(level.name().to_string())),
    }
}

fn conj_at(s: &Scalar, h: usize) -> Result<Scalar, ScalarError> {
    if h == 0 || s.effective_height() == 0 {
        return Ok(s.clone());
    }
    if s.effective_height() < h {
        return conj_at(s, s.effective_height());
    }
    let tower = s.tower().clone();
    let (a0, a1) = s.split_at_level(h);
    let c0 = conj_at(&a0, h - 1)?;
    let c1 = conj_at(&a1, h - 1)?;
    let theta = tower.generator(h - 1);
    let theta_bar = if level_is_real(&tower, h - 1)? {
        theta
    } else {
        let (p, _) = tower.levels()[h - 1].min_poly();
        &(-p) - &theta
    };
    Ok(&c0 + &(&c1 * &theta_bar))
}

/// Complex conjugate; an involutive field automorphism of the tower.
pub fn conjugate(s: &Scalar) -> Result<Scalar, ScalarError> {
    conj_at(s, s.effective_height())
}

/// Whether `conjugate(s) == s`.
pub fn is_conjugation_fixed(s: &Scalar) -> Result<bool, ScalarError> {
    Ok(conjugate(s)? == *s)
}

fn sign_at(x: &Scalar, h: usize) -> Option<Ordering> {
    let h = h.min(x.effective_height());
    if h == 0 {
        return Some(rational_sign(&x.coords()[0]));
    }
    let tower = x.tower().clone();
    if !level_is_real(&tower, h - 1).ok()? {
        return None;
    }
    let (a0, a1) = x.split_at_level(h);
    let level = &tower.levels()[h - 1];
    let (p, _) = level.min_poly();
    let disc = level.discriminant();
    let two = Scalar::from_int(2);
    let b = &a1 / &two;
    let a = &a0 - &(&b * p);
    let sa = sign_at(&a, h - 1)?;
    let sb = sign_at(&b, h - 1)?;
    if sa == Ordering::Equal || sa == sb {
        return Some(sb.then(sa));
    }
    if sb == Ordering::Equal {
        return Some(sa);
    }
    let gap = &(&a * &a) - &(&(&b * &b) * &disc);
    match sign_at(&gap, h - 1)? {
        Ordering::Greater => Some(sa),
        Ordering::Less => Some(sb),
        Ordering::Equal => None,
    }
}

pub(super) fn sign(x: &Scalar) -> Option<Ordering> {
    sign_at(x, x.effective_height())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> Arc<FieldTower> {
        FieldTower::rationals().adjoin("i", &Scalar::zero(), &Scalar::one()).unwrap()
    }

    #[test]
    fn gaussian_conjugation() {
        let t = gaussian();
        let i = t.generator(0);
        let z = &Scalar::from_int(3) + &(&Scalar::from_int(2) * &i);
        assert_eq!(conjugate(&z).unwrap().to_string(), "3-2*i");
        let w = &i * &(&Scalar::one() + &i);
        assert_eq!(conjugate(&w).unwrap().to_string(), "-1-i");
        let r = Scalar::from_ratio(5, 7);
        assert_eq!(conjugate(&r).unwrap(), r);
    }

    #[test]
    fn real_level_is_fixed_complex_level_is_not() {
        let t = FieldTower::rationals().adjoin("s", &Scalar::zero(), &Scalar::from_int(-2)).unwrap();
        let s = t.generator(0);
        assert_eq!(conjugate(&s).unwrap(), s);
        let t = FieldTower::rationals().adjoin("w", &Scalar::one(), &Scalar::one()).unwrap();
        let w = t.generator(0);
        let wb = conjugate(&w).unwrap();
        assert_eq!(&w * &wb, Scalar::one());
        assert_eq!(conjugate(&wb).unwrap(), w);
    }

    #[test]
    fn conjugation_is_multiplicative() {
        let t = gaussian().adjoin("s", &Scalar::zero(), &Scalar::from_int(-3)).unwrap();
        let i = t.generator(0);
        let s = t.generator(1);
        let x = &(&i * &s) + &Scalar::from_int(2);
        let y = &s - &(&Scalar::from_ratio(1, 3) * &i);
        let lhs = conjugate(&(&x * &y)).unwrap();
        let rhs = &conjugate(&x).unwrap() * &conjugate(&y).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn signs_in_real_quadratic() {
        let t = FieldTower::rationals().adjoin("s", &Scalar::zero(), &Scalar::from_int(-2)).unwrap();
        let s = t.generator(0);
        assert_eq!(s.sign(), Some(Ordering::Greater));
        // 3 - 2 sqrt 2 > 0, 1 - sqrt 2 < 0
        let a = &Scalar::from_int(3) - &(&Scalar::from_int(2) * &s);
        assert_eq!(a.sign(), Some(Ordering::Greater));
        let b = &Scalar::one() - &s;
        assert_eq!(b.sign(), Some(Ordering::Less));
        let i = gaussian().generator(0);
        assert_eq!(i.sign(), None);
        assert_eq!((&i * &i).sign(), Some(Ordering::Less));
    }
}
