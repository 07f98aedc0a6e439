//! Exact arithmetic in a small tower of quadratic extensions of the rationals.
//!
//! A [`FieldTower`] is a list of levels, each adjoining a root of a monic
//! irreducible quadratic over the field below. A [`Scalar`] stores one
//! rational coordinate per product of adjoined generators: bit `k` of the
//! coordinate index says whether the generator of level `k` is a factor.
//! Coordinate vectors are trimmed to the smallest height that holds the
//! value, so rational scalars stay cheap inside large towers.

mod real;
mod roots;

pub use real::{conjugate, is_conjugation_fixed};
pub use roots::{classify_genericity, extend_with_root, quadratic_roots, solve_sl2_parameter, Genericity};

use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock};

/// Default maximum number of adjoined levels (Gaussian plus two quadratics).
pub const DEFAULT_TOWER_CAP: usize = 3;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("tower cap of {cap} adjoined levels exceeded while adjoining a root of {poly}")]
    TowerCapExceeded { cap: usize, poly: String },
    #[error("tower already has {0} non-Gaussian quadratic levels")]
    TooManyQuadratics(usize),
    #[error("x^2 + ({p})x + ({r}) has a root in the field below; not a minimal polynomial")]
    Reducible { p: String, r: String },
    #[error("root name `{0}` is already used in the tower")]
    DuplicateName(String),
    #[error("towers are not compatible: {0}")]
    IncompatibleTowers(String),
    #[error("tower is not conjugation-stable at level `{0}`")]
    NotConjugationStable(String),
    #[error("parameter must be nonzero")]
    ZeroParameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelKind {
    /// Adjoins a square root of -1 named `i`.
    Gaussian,
    /// Adjoins a root of a general quadratic.
    Quadratic,
}

/// One adjoined generator `theta` with `theta^2 + p*theta + r = 0`.
#[derive(Debug)]
pub struct Level {
    name: String,
    kind: LevelKind,
    p: Scalar,
    r: Scalar,
}

impl Level {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> LevelKind {
        self.kind
    }

    /// Coefficients `(p, r)` of the minimal polynomial `x^2 + p x + r`.
    pub fn min_poly(&self) -> (&Scalar, &Scalar) {
        (&self.p, &self.r)
    }

    /// Discriminant `p^2 - 4r`, an element of the field below.
    pub fn discriminant(&self) -> Scalar {
        &self.p * &self.p - Scalar::from_int(4) * &self.r
    }

    /// The minimal polynomial in the variable `x`, e.g. `x^2-5/2*x+1`.
    pub fn min_poly_string(&self) -> String {
        let mut out = String::from("x^2");
        for (coef, mono) in [(&self.p, "*x"), (&self.r, "")] {
            if coef.is_zero() {
                continue;
            }
            let text = if coef.is_rational() {
                let s = coef.to_string();
                if mono.is_empty() {
                    s
                } else if coef.is_one() {
                    "x".to_string()
                } else if (-coef).is_one() {
                    "-x".to_string()
                } else {
                    format!("{s}{mono}")
                }
            } else {
                format!("({coef}){mono}")
            };
            if !text.starts_with('-') {
                out.push('+');
            }
            out.push_str(&text);
        }
        out
    }
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.kind == other.kind && self.p == other.p && self.r == other.r
    }
}

/// An exact field: the rationals with zero or more quadratic levels on top.
#[derive(Debug)]
pub struct FieldTower {
    levels: Vec<Arc<Level>>,
    cap: usize,
}

impl FieldTower {
    /// The shared base tower (no adjoined levels, default cap).
    pub fn rationals() -> Arc<FieldTower> {
        static BASE: OnceLock<Arc<FieldTower>> = OnceLock::new();
        BASE.get_or_init(|| Arc::new(FieldTower { levels: Vec::new(), cap: DEFAULT_TOWER_CAP }))
            .clone()
    }

    /// A fresh base tower whose extensions may hold at most `cap` levels.
    pub fn rationals_with_cap(cap: usize) -> Arc<FieldTower> {
        if cap == DEFAULT_TOWER_CAP {
            return Self::rationals();
        }
        Arc::new(FieldTower { levels: Vec::new(), cap })
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn levels(&self) -> &[Arc<Level>] {
        &self.levels
    }

    pub fn level_by_name(&self, name: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.name == name)
    }

    pub fn has_gaussian(&self) -> bool {
        self.levels.iter().any(|l| l.kind == LevelKind::Gaussian)
    }

    /// The generator adjoined at level `k` (0-based).
    pub fn generator(self: &Arc<Self>, k: usize) -> Scalar {
        assert!(k < self.levels.len(), "level {k} out of range");
        let mut coords = vec![BigRational::zero(); 1 << (k + 1)];
        coords[1 << k] = BigRational::one();
        Scalar::from_coords(self.clone(), coords)
    }

    /// `name: minimal polynomial` for every level, bottom-up.
    pub fn describe(&self) -> Vec<String> {
        self.levels.iter().map(|l| format!("{}: {}", l.name, l.min_poly_string())).collect()
    }

    /// Adjoins a root of `x^2 + p x + r`, which must have no root in `self`.
    ///
    /// `x^2 + 1` is recorded as the Gaussian level. Scalars `p` and `r` must
    /// live in (a prefix of) this tower.
    pub fn adjoin(
        self: &Arc<Self>,
        name: &str,
        p: &Scalar,
        r: &Scalar,
    ) -> Result<Arc<FieldTower>, ScalarError> {
        let p = p.lift_to(self);
        let r = r.lift_to(self);
        if self.levels.iter().any(|l| l.name == name) {
            return Err(ScalarError::DuplicateName(name.to_string()));
        }
        let poly = format!("x^2+({p})x+({r})");
        if self.levels.len() >= self.cap {
            return Err(ScalarError::TowerCapExceeded { cap: self.cap, poly });
        }
        let kind = if p.is_zero() && r.is_one() { LevelKind::Gaussian } else { LevelKind::Quadratic };
        if kind == LevelKind::Quadratic {
            let quadratics = self.levels.iter().filter(|l| l.kind == LevelKind::Quadratic).count();
            if quadratics >= 2 {
                return Err(ScalarError::TooManyQuadratics(quadratics));
            }
        }
        let disc = &p * &p - Scalar::from_int(4) * &r;
        if disc.sqrt().is_some() {
            return Err(ScalarError::Reducible { p: p.to_string(), r: r.to_string() });
        }
        let mut levels = self.levels.clone();
        levels.push(Arc::new(Level { name: name.to_string(), kind, p, r }));
        Ok(Arc::new(FieldTower { levels, cap: self.cap }))
    }

    /// A level name derived from `hint` that is not yet used.
    pub fn fresh_name(&self, hint: &str) -> String {
        if self.level_by_name(hint).is_none() {
            return hint.to_string();
        }
        (2..)
            .map(|k| format!("{hint}{k}"))
            .find(|n| self.level_by_name(n).is_none())
            .expect("unbounded name supply")
    }

    fn agrees_below(a: &Arc<FieldTower>, b: &Arc<FieldTower>, h: usize) -> bool {
        if Arc::ptr_eq(a, b) {
            return true;
        }
        if a.levels.len() < h || b.levels.len() < h {
            return false;
        }
        a.levels[..h]
            .iter()
            .zip(&b.levels[..h])
            .all(|(x, y)| Arc::ptr_eq(x, y) || **x == **y)
    }

    /// The longer of two towers when the shorter is a prefix of it.
    pub fn join(a: &Arc<FieldTower>, b: &Arc<FieldTower>) -> Result<Arc<FieldTower>, ScalarError> {
        let h = a.height().min(b.height());
        if !Self::agrees_below(a, b, h) {
            return Err(ScalarError::IncompatibleTowers(format!(
                "[{}] vs [{}]",
                a.describe().join(", "),
                b.describe().join(", ")
            )));
        }
        Ok(if b.height() > a.height() { b.clone() } else { a.clone() })
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(x, y)| Arc::ptr_eq(x, y) || **x == **y)
    }
}

/// An element of a [`FieldTower`].
#[derive(Clone)]
pub struct Scalar {
    tower: Arc<FieldTower>,
    coords: Vec<BigRational>,
}

fn trim(coords: &mut Vec<BigRational>) {
    while coords.len() > 1 {
        let half = coords.len() / 2;
        if coords[half..].iter().all(Zero::is_zero) {
            coords.truncate(half);
        } else {
            break;
        }
    }
}

fn padded(c: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut v = c.to_vec();
    v.resize(len, BigRational::zero());
    v
}

fn add_vec(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn sub_vec(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y,
            (None, None) => unreachable!(),
        })
        .collect()
}

fn is_zero_vec(a: &[BigRational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Product of two coordinate vectors of equal power-of-two length over `levels`.
fn mul_rec(a: &[BigRational], b: &[BigRational], levels: &[Arc<Level>]) -> Vec<BigRational> {
    debug_assert_eq!(a.len(), b.len());
    if a.len() == 1 {
        return vec![&a[0] * &b[0]];
    }
    let half = a.len() / 2;
    let h = half.trailing_zeros() as usize;
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let a1z = is_zero_vec(a1);
    let b1z = is_zero_vec(b1);
    if a1z && b1z {
        let mut out = mul_rec(a0, b0, levels);
        out.resize(a.len(), BigRational::zero());
        return out;
    }
    if a1z {
        let mut out = mul_rec(a0, b0, levels);
        out.extend(mul_rec(a0, b1, levels));
        return out;
    }
    if b1z {
        let mut out = mul_rec(a0, b0, levels);
        out.extend(mul_rec(a1, b0, levels));
        return out;
    }
    let level = &levels[h];
    let p = padded(&level.p.coords, half);
    let r = padded(&level.r.coords, half);
    let t00 = mul_rec(a0, b0, levels);
    let t11 = mul_rec(a1, b1, levels);
    let cross = add_vec(&mul_rec(a0, b1, levels), &mul_rec(a1, b0, levels));
    let lo = sub_vec(&t00, &mul_rec(&r, &t11, levels));
    let hi = sub_vec(&cross, &mul_rec(&p, &t11, levels));
    let mut out = lo;
    out.extend(hi);
    out
}

/// Inverse of a nonzero coordinate vector via the norm to the level below.
fn inv_rec(a: &[BigRational], levels: &[Arc<Level>]) -> Vec<BigRational> {
    if a.len() == 1 {
        return vec![a[0].recip()];
    }
    let half = a.len() / 2;
    let h = half.trailing_zeros() as usize;
    let (a0, a1) = a.split_at(half);
    if is_zero_vec(a1) {
        let mut out = inv_rec(a0, levels);
        out.resize(a.len(), BigRational::zero());
        return out;
    }
    let level = &levels[h];
    let p = padded(&level.p.coords, half);
    let r = padded(&level.r.coords, half);
    // conj = (a0 - p a1) - a1 theta, norm = a0^2 - p a0 a1 + r a1^2
    let pa1 = mul_rec(&p, a1, levels);
    let conj0 = sub_vec(a0, &pa1);
    let norm = add_vec(
        &sub_vec(&mul_rec(a0, a0, levels), &mul_rec(&pa1, a0, levels)),
        &mul_rec(&r, &mul_rec(a1, a1, levels), levels),
    );
    let ninv = inv_rec(&norm, levels);
    let mut out = mul_rec(&conj0, &ninv, levels);
    out.extend(mul_rec(a1, &ninv, levels).into_iter().map(|x| -x));
    out
}

impl Scalar {
    fn from_coords(tower: Arc<FieldTower>, mut coords: Vec<BigRational>) -> Scalar {
        debug_assert!(coords.len().is_power_of_two());
        trim(&mut coords);
        Scalar { tower, coords }
    }

    pub fn zero() -> Scalar {
        Scalar { tower: FieldTower::rationals(), coords: vec![BigRational::zero()] }
    }

    pub fn one() -> Scalar {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Scalar {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Scalar {
        Scalar { tower: FieldTower::rationals(), coords: vec![q] }
    }

    /// A rational scalar attached to `tower` (so later mixing keeps the cap).
    pub fn rational_in(tower: &Arc<FieldTower>, q: BigRational) -> Scalar {
        Scalar { tower: tower.clone(), coords: vec![q] }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Rational coordinates over the monomial basis, trimmed.
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Number of levels this value actually uses.
    pub fn effective_height(&self) -> usize {
        self.coords.len().trailing_zeros() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.coords.len() == 1 && self.coords[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coords.len() == 1 && self.coords[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.len() == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    /// The same value viewed in a larger tower that agrees on the used levels.
    pub fn lift_to(&self, tower: &Arc<FieldTower>) -> Scalar {
        assert!(
            FieldTower::agrees_below(&self.tower, tower, self.effective_height()),
            "scalar {self} does not live in tower [{}]",
            tower.describe().join(", ")
        );
        Scalar { tower: tower.clone(), coords: self.coords.clone() }
    }

    fn common_tower(&self, other: &Scalar) -> Arc<FieldTower> {
        if Arc::ptr_eq(&self.tower, &other.tower) {
            return self.tower.clone();
        }
        let h = self.effective_height().max(other.effective_height());
        let (long, short) =
            if other.tower.height() > self.tower.height() { (&other.tower, &self.tower) } else { (&self.tower, &other.tower) };
        let used = h.min(short.height());
        assert!(
            FieldTower::agrees_below(long, short, used) && long.height() >= h,
            "arithmetic on scalars from incompatible towers: {self} and {other}"
        );
        long.clone()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::from_coords(self.tower.clone(), inv_rec(&self.coords, &self.tower.levels)))
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Scalar::rational_in(&self.tower, BigRational::one());
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Splits `self = a0 + a1*theta_h` where `theta_h` is the generator of level `h - 1`.
    pub(crate) fn split_at_level(&self, h: usize) -> (Scalar, Scalar) {
        assert!(h >= 1 && self.effective_height() <= h);
        let half = 1usize << (h - 1);
        let full = padded(&self.coords, 2 * half);
        let (a0, a1) = full.split_at(half);
        (
            Scalar::from_coords(self.tower.clone(), a0.to_vec()),
            Scalar::from_coords(self.tower.clone(), a1.to_vec()),
        )
    }

    /// Square root inside the tower, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        roots::sqrt_in(self, self.tower.height())
    }

    /// Sign of a scalar in the real subfield, or `None` when it cannot be
    /// placed there (non-real level involved, or non-real value).
    pub fn sign(&self) -> Option<Ordering> {
        real::sign(self)
    }
}

fn rational_sign(q: &BigRational) -> Ordering {
    if q.is_positive() {
        Ordering::Greater
    } else if q.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.coords != other.coords {
            return false;
        }
        let h = self.effective_height();
        h == 0 || FieldTower::agrees_below(&self.tower, &other.tower, h)
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<&str> = (0..self.tower.height())
                .filter(|k| idx & (1 << k) != 0)
                .map(|k| self.tower.levels[k].name.as_str())
                .collect();
            let mono = mono.join("*");
            let term = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            if !first && !term.starts_with('-') {
                f.write_str("+")?;
            }
            f.write_str(&term)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { tower: self.tower.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for c in &mut self.coords {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let tower = self.common_tower(rhs);
        Scalar::from_coords(tower, add_vec(&self.coords, &rhs.coords))
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let tower = self.common_tower(rhs);
        Scalar::from_coords(tower, sub_vec(&self.coords, &rhs.coords))
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let tower = self.common_tower(rhs);
        if self.is_rational() {
            let k = &self.coords[0];
            return Scalar::from_coords(tower, rhs.coords.iter().map(|c| k * c).collect());
        }
        if rhs.is_rational() {
            let k = &rhs.coords[0];
            return Scalar::from_coords(tower, self.coords.iter().map(|c| c * k).collect());
        }
        let n = self.coords.len().max(rhs.coords.len());
        let a = padded(&self.coords, n);
        let b = padded(&rhs.coords, n);
        Scalar::from_coords(tower.clone(), mul_rec(&a, &b, &tower.levels))
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Scalar {
        Scalar::from_rational(q)
    }
}
