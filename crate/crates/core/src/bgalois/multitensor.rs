//! Elements of iterated tensor products of free algebras, used to compare
//! composites of coproducts and coactions on generators exactly.

use crate::freealg::{NcPoly, Word};
use crate::scalars::Scalar;
use std::collections::BTreeMap;

/// `sum c * (w_1 (x) ... (x) w_arity)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTensor {
    arity: usize,
    terms: BTreeMap<Vec<Word>, Scalar>,
}

impl MultiTensor {
    pub fn zero(arity: usize) -> MultiTensor {
        MultiTensor { arity, terms: BTreeMap::new() }
    }

    pub fn unit(arity: usize) -> MultiTensor {
        MultiTensor::pure(vec![Word::empty(); arity], Scalar::one())
    }

    pub fn pure(words: Vec<Word>, c: Scalar) -> MultiTensor {
        let mut t = MultiTensor::zero(words.len());
        t.add_term(words, &c);
        t
    }

    pub fn from_poly(f: &NcPoly) -> MultiTensor {
        let mut t = MultiTensor::zero(1);
        for (w, c) in f.terms() {
            t.add_term(vec![w.clone()], c);
        }
        t
    }

    /// `sum_k x_k (x) y_k` from letter pairs.
    pub fn sum_of_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> MultiTensor {
        let mut t = MultiTensor::zero(2);
        for (x, y) in pairs {
            t.add_term(vec![Word::letter(x), Word::letter(y)], &Scalar::one());
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, words: Vec<Word>, c: &Scalar) {
        assert_eq!(words.len(), self.arity, "tensor arity mismatch");
        let v = &self.terms.get(&words).cloned().unwrap_or_else(Scalar::zero) + c;
        if v.is_zero() {
            self.terms.remove(&words);
        } else {
            self.terms.insert(words, v);
        }
    }

    /// Factorwise product.
    pub fn mul(&self, other: &MultiTensor) -> MultiTensor {
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        let mut out = MultiTensor::zero(self.arity);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.iter().zip(b).map(|(x, y)| x.concat(y)).collect(), &(ca * cb));
            }
        }
        out
    }

    /// Replaces factor `k` through an algebra map given on letters; every
    /// image has the same arity `r`, and the result has arity `arity + r - 1`.
    pub fn apply_at(&self, k: usize, images: &[MultiTensor]) -> MultiTensor {
        let r = images.first().map_or(0, MultiTensor::arity);
        let mut out = MultiTensor::zero(self.arity + r - 1);
        for (words, c) in &self.terms {
            let mut img = MultiTensor::unit(r);
            for &x in words[k].letters() {
                img = img.mul(&images[x as usize]);
            }
            for (mid, cm) in &img.terms {
                let mut w: Vec<Word> = words[..k].to_vec();
                w.extend(mid.iter().cloned());
                w.extend(words[k + 1..].iter().cloned());
                out.add_term(w, &(c * cm));
            }
        }
        out
    }
}
