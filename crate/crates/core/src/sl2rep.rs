//! Simple comodules of the quantum SL(2) function algebra and their tensor
//! products, generically and at a root of unity.
//!
//! At a root of unity of order `N` the simples are `V(n) (x) U(m)` with
//! `0 <= m <= N0 - 1`. Only the products with known answers are computed:
//! ladders on the `V` side, `U` ladders that stay at or below `N0 - 1`, and
//! the single non-semisimple product `U(N0 - 1) (x) U(1)`.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SlError {
    #[error("root of unity order {0} is below 3")]
    InvalidOrder(u32),
    #[error("label {label} is out of range: U index must be at most {max}")]
    LabelOutOfRange { label: SimpleLabel, max: u32 },
    #[error("V labels only exist at a root of unity: {0}")]
    VInGenericRegime(SimpleLabel),
    #[error("product {0} (x) {1} is not determined by the stated fusion rules")]
    OutOfSpecifiedRange(SimpleLabel, SimpleLabel),
    #[error("cannot parse label {0:?}")]
    BadLabel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Generic,
    RootOfUnity { order: u32, n0: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FusionContext {
    pub regime: Regime,
}

/// `N` if odd, `N / 2` if even.
pub fn n0_of(order: u32) -> Result<u32, SlError> {
    if order < 3 {
        return Err(SlError::InvalidOrder(order));
    }
    Ok(if order % 2 == 1 { order } else { order / 2 })
}

impl FusionContext {
    pub fn generic() -> FusionContext {
        FusionContext { regime: Regime::Generic }
    }

    pub fn root_of_unity(order: u32) -> Result<FusionContext, SlError> {
        Ok(FusionContext { regime: Regime::RootOfUnity { order, n0: n0_of(order)? } })
    }

    pub fn n0(&self) -> Option<u32> {
        match self.regime {
            Regime::Generic => None,
            Regime::RootOfUnity { n0, .. } => Some(n0),
        }
    }

    pub fn check(&self, x: SimpleLabel) -> Result<(), SlError> {
        match self.regime {
            Regime::Generic if x.v > 0 => Err(SlError::VInGenericRegime(x)),
            Regime::RootOfUnity { n0, .. } if x.u > n0 - 1 => Err(SlError::LabelOutOfRange { label: x, max: n0 - 1 }),
            _ => Ok(()),
        }
    }
}

/// `V(v) (x) U(u)`; generically `v = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SimpleLabel {
    pub v: u32,
    pub u: u32,
}

impl SimpleLabel {
    pub const UNIT: SimpleLabel = SimpleLabel { v: 0, u: 0 };

    pub fn u(u: u32) -> SimpleLabel {
        SimpleLabel { v: 0, u }
    }

    pub fn v(v: u32) -> SimpleLabel {
        SimpleLabel { v, u: 0 }
    }

    pub fn dim(&self) -> u64 {
        (self.v as u64 + 1) * (self.u as u64 + 1)
    }
}

impl fmt::Display for SimpleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.v, self.u) {
            (0, u) => write!(f, "U{u}"),
            (v, 0) => write!(f, "V{v}"),
            (v, u) => write!(f, "V{v}xU{u}"),
        }
    }
}

impl FromStr for SimpleLabel {
    type Err = SlError;

    /// `U3`, `V1`, `V2xU1`, or a bare integer for `U(k)`.
    fn from_str(s: &str) -> Result<SimpleLabel, SlError> {
        let bad = || SlError::BadLabel(s.to_string());
        let s = s.trim();
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        if let Some((v, u)) = s.split_once(['x', 'X']) {
            let v = v.strip_prefix('V').ok_or_else(bad)?;
            let u = u.strip_prefix('U').ok_or_else(bad)?;
            return Ok(SimpleLabel { v: num(v)?, u: num(u)? });
        }
        if let Some(u) = s.strip_prefix('U') {
            return Ok(SimpleLabel::u(num(u)?));
        }
        if let Some(v) = s.strip_prefix('V') {
            return Ok(SimpleLabel::v(num(v)?));
        }
        Ok(SimpleLabel::u(num(s)?))
    }
}

/// A finite sum of simples with positive multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RepElement(BTreeMap<SimpleLabel, u64>);

impl RepElement {
    pub fn zero() -> RepElement {
        RepElement::default()
    }

    pub fn simple(x: SimpleLabel) -> RepElement {
        let mut r = RepElement::zero();
        r.add(x, 1);
        r
    }

    pub fn add(&mut self, x: SimpleLabel, mult: u64) {
        if mult > 0 {
            *self.0.entry(x).or_insert(0) += mult;
        }
    }

    pub fn sum(&self, other: &RepElement) -> RepElement {
        let mut out = self.clone();
        for (&x, &m) in &other.0 {
            out.add(x, m);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (SimpleLabel, u64)> + '_ {
        self.0.iter().map(|(&x, &m)| (x, m))
    }

    pub fn multiplicity(&self, x: SimpleLabel) -> u64 {
        self.0.get(&x).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for RepElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (x, m)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m > 1 {
                write!(f, "{m}*")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Composition factors of a non-split product, bottom-up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub factors: Vec<SimpleLabel>,
}

impl fmt::Display for FiltrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Fusion {
    Decomposed(RepElement),
    NonSemisimple(FiltrationReport),
}

impl Fusion {
    pub fn dim(&self) -> u64 {
        match self {
            Fusion::Decomposed(r) => dim_of(r),
            Fusion::NonSemisimple(fr) => fr.factors.iter().map(SimpleLabel::dim).sum(),
        }
    }
}

/// `|k - l|, |k - l| + 2, ..., k + l`.
fn ladder(k: u32, l: u32) -> impl Iterator<Item = u32> {
    (k.abs_diff(l)..=k + l).step_by(2)
}

pub fn tensor_decompose(x: SimpleLabel, y: SimpleLabel, ctx: &FusionContext) -> Result<Fusion, SlError> {
    ctx.check(x)?;
    ctx.check(y)?;
    let n0 = match ctx.regime {
        Regime::Generic => {
            let mut r = RepElement::zero();
            for u in ladder(x.u, y.u) {
                r.add(SimpleLabel::u(u), 1);
            }
            return Ok(Fusion::Decomposed(r));
        }
        Regime::RootOfUnity { n0, .. } => n0,
    };
    if x.u + y.u > n0 - 1 {
        let edge = (x.u, y.u) == (n0 - 1, 1) || (x.u, y.u) == (1, n0 - 1);
        if edge && x.v == 0 && y.v == 0 {
            let low = SimpleLabel::u(n0 - 2);
            return Ok(Fusion::NonSemisimple(FiltrationReport { factors: vec![low, SimpleLabel::v(1), low] }));
        }
        return Err(SlError::OutOfSpecifiedRange(x, y));
    }
    let mut r = RepElement::zero();
    for v in ladder(x.v, y.v) {
        for u in ladder(x.u, y.u) {
            r.add(SimpleLabel { v, u }, 1);
        }
    }
    Ok(Fusion::Decomposed(r))
}

/// Bilinear extension of [`tensor_decompose`]; fails on any non-split or
/// undetermined pair.
pub fn tensor_elements(a: &RepElement, b: &RepElement, ctx: &FusionContext) -> Result<RepElement, SlError> {
    let mut out = RepElement::zero();
    for (x, m) in a.terms() {
        for (y, n) in b.terms() {
            match tensor_decompose(x, y, ctx)? {
                Fusion::Decomposed(r) => {
                    for (z, k) in r.terms() {
                        out.add(z, m * n * k);
                    }
                }
                Fusion::NonSemisimple(_) => return Err(SlError::OutOfSpecifiedRange(x, y)),
            }
        }
    }
    Ok(out)
}

pub fn dim_of(x: &RepElement) -> u64 {
    x.terms().map(|(l, m)| m * l.dim()).sum()
}

/// The two incompatible descriptions of `U(N0 - 1) (x) U(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContradictionReport {
    pub order: u32,
    pub n0: u32,
    /// What a semisimple ladder would give: `U(N0 - 2) + U(N0)`.
    pub ladder: Vec<SimpleLabel>,
    pub filtration: Vec<SimpleLabel>,
    pub ladder_dim: u64,
    pub filtration_dim: u64,
    pub factors_differ: bool,
}

pub fn fusion_contradiction_check(order: u32) -> Result<ContradictionReport, SlError> {
    let ctx = FusionContext::root_of_unity(order)?;
    let n0 = n0_of(order)?;
    let ladder = vec![SimpleLabel::u(n0 - 2), SimpleLabel::u(n0)];
    let filtration = match tensor_decompose(SimpleLabel::u(n0 - 1), SimpleLabel::u(1), &ctx)? {
        Fusion::NonSemisimple(f) => f.factors,
        Fusion::Decomposed(r) => r.terms().flat_map(|(x, m)| std::iter::repeat_n(x, m as usize)).collect(),
    };
    let multiset = |v: &[SimpleLabel]| {
        let mut s = v.to_vec();
        s.sort();
        s
    };
    Ok(ContradictionReport {
        order,
        n0,
        ladder_dim: ladder.iter().map(SimpleLabel::dim).sum(),
        filtration_dim: filtration.iter().map(SimpleLabel::dim).sum(),
        factors_differ: multiset(&ladder) != multiset(&filtration),
        ladder,
        filtration,
    })
}
