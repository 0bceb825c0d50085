//! Sparse exact multivectors in the exterior algebra of `(ℂ^k)^{⊗d}`.
//!
//! The basis vector `e_X` is the wedge of the cells of `X` taken in
//! lexicographic order. Products are computed on bit masks; the sign of
//! `e_A ∧ e_B` is the parity of pairs `a ∈ A, b ∈ B` with `a > b`.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cube::{CubeSet, Dims};
use crate::error::{Error, Result};

/// Parity of inversions between the concatenation `A ++ B` (both sorted).
pub fn merge_sign(a: u128, b: u128) -> i32 {
    let mut parity = 0u32;
    let mut rest = b;
    while rest != 0 {
        let r = rest.trailing_zeros();
        rest &= rest - 1;
        parity += (a >> r >> 1).count_ones();
    }
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

/// How a dual basis vector contracts a basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Contraction {
    /// Adjoint of left exterior multiplication: `⟨e*_A ⌟ w, x⟩ = ⟨w, e_A ∧ x⟩`.
    #[default]
    Adjoint,
    /// Removes the cells of `A` from `B` with coefficient `+1`.
    Unsigned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multivector {
    dims: Dims,
    terms: BTreeMap<CubeSet, BigInt>,
}

const PAR_THRESHOLD: usize = 256;

impl Multivector {
    pub fn zero(dims: Dims) -> Self {
        Multivector { dims, terms: BTreeMap::new() }
    }

    pub fn scalar(dims: Dims, c: impl Into<BigInt>) -> Self {
        Self::monomial(CubeSet::empty(dims), c)
    }

    pub fn one(dims: Dims) -> Self {
        Self::scalar(dims, 1)
    }

    pub fn basis(x: CubeSet) -> Self {
        Self::monomial(x, 1)
    }

    pub fn monomial(x: CubeSet, c: impl Into<BigInt>) -> Self {
        let mut v = Multivector::zero(x.dims());
        v.add_term(x, c.into());
        v
    }

    pub fn from_terms<I>(dims: Dims, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (CubeSet, BigInt)>,
    {
        let mut v = Multivector::zero(dims);
        for (x, c) in terms {
            if x.dims() != dims {
                return Err(mismatch(dims, x.dims()));
            }
            v.add_term(x, c);
        }
        Ok(v)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn terms(&self) -> &BTreeMap<CubeSet, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x: &CubeSet) -> BigInt {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    /// Common cardinality of all terms; `None` for zero or mixed grades.
    pub fn grade(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(CubeSet::len);
        let g = it.next()?;
        it.all(|h| h == g).then_some(g)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.grade().is_some()
    }

    pub fn add_term(&mut self, x: CubeSet, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(x) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Multivector {
        if c.is_zero() {
            return Multivector::zero(self.dims);
        }
        Multivector { dims: self.dims, terms: self.terms.iter().map(|(x, v)| (*x, v * c)).collect() }
    }

    fn merge(mut self, other: Multivector) -> Multivector {
        if self.terms.len() < other.terms.len() {
            return other.merge(self);
        }
        for (x, c) in other.terms {
            self.add_term(x, c);
        }
        self
    }

    fn check(&self, other: &Multivector) -> Result<()> {
        if self.dims != other.dims {
            return Err(mismatch(self.dims, other.dims));
        }
        Ok(())
    }

    /// `u ∧ v`.
    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        self.check(other)?;
        let dims = self.dims;
        let left: Vec<(&CubeSet, &BigInt)> = self.terms.iter().collect();
        let row = |(a, ca): &(&CubeSet, &BigInt)| {
            let mut part = Multivector::zero(dims);
            for (b, cb) in &other.terms {
                if !a.is_disjoint(b) {
                    continue;
                }
                let sign = merge_sign(a.mask(), b.mask());
                let c = *ca * cb;
                part.add_term(a.union(b), if sign > 0 { c } else { -c });
            }
            part
        };
        if left.len() * other.len() < PAR_THRESHOLD * PAR_THRESHOLD {
            return Ok(left.iter().map(row).fold(Multivector::zero(dims), Multivector::merge));
        }
        Ok(left.par_iter().map(row).reduce(|| Multivector::zero(dims), Multivector::merge))
    }

    /// Contraction `u* ⌟ v` of `v` by the dual of `self`.
    pub fn interior(&self, v: &Multivector, convention: Contraction) -> Result<Multivector> {
        self.check(v)?;
        let dims = self.dims;
        let mut out = Multivector::zero(dims);
        for (a, ca) in &self.terms {
            for (b, cb) in &v.terms {
                if !a.is_subset(b) {
                    continue;
                }
                let rest = b.difference(a);
                let sign = match convention {
                    Contraction::Adjoint => merge_sign(a.mask(), rest.mask()),
                    Contraction::Unsigned => 1,
                };
                let c = ca * cb;
                out.add_term(rest, if sign > 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    /// Hodge star `v ↦ v* ⌟ vol`, `vol = e_{[k]^d}`.
    pub fn hodge_star(&self) -> Result<Multivector> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let vol = Multivector::basis(CubeSet::full(self.dims));
        self.interior(&vol, Contraction::Adjoint)
    }

    /// Pairing `⟨u, v⟩` of coefficient vectors in the `e_X` basis.
    pub fn pairing(&self, other: &Multivector) -> Result<BigInt> {
        self.check(other)?;
        Ok(self.terms.iter().filter_map(|(x, c)| other.terms.get(x).map(|d| c * d)).sum())
    }

    /// `n`-fold wedge power; `power(0) = 1`.
    pub fn power(&self, n: usize) -> Multivector {
        let mut acc = Multivector::one(self.dims);
        for _ in 0..n {
            acc = self.wedge(&acc).expect("same dims");
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// JSON form: `[{"cells": [[..],..], "coefficient": "<decimal>"}, ..]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms.iter().map(|(x, c)| json!({"cells": x.to_json(), "coefficient": c.to_string()})).collect(),
        )
    }

    pub fn from_json(dims: Dims, v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("multivector must be a JSON array".into()))?;
        let mut out = Multivector::zero(dims);
        for t in arr {
            let x = CubeSet::from_json(dims, &t["cells"])?;
            let c: BigInt = t["coefficient"]
                .as_str()
                .ok_or_else(|| Error::Parse("coefficient must be a decimal string".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("coefficient: {e}")))?;
            out.add_term(x, c);
        }
        Ok(out)
    }
}

fn mismatch(a: Dims, b: Dims) -> Error {
    Error::DimensionMismatch { d1: a.d, k1: a.k, d2: b.d, k2: b.k }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dims, rhs.dims, "dimension mismatch");
        self.clone().merge(rhs.clone())
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        Multivector { dims: self.dims, terms: self.terms.iter().map(|(x, c)| (*x, -c)).collect() }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

/// Wedge of the single cells `ranks`, in the given order.
pub fn basis_from_cells(dims: Dims, ranks: &[usize]) -> Result<Multivector> {
    let mut acc = Multivector::one(dims);
    for &r in ranks {
        let e = Multivector::basis(CubeSet::from_ranks(dims, &[r])?);
        acc = acc.wedge(&e)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d32() -> Dims {
        Dims::new(3, 2).unwrap()
    }

    fn e(dims: Dims, s: &str) -> Multivector {
        Multivector::basis(CubeSet::parse_text(dims, s).unwrap())
    }

    #[test]
    fn wedge_basics() {
        let dims = d32();
        let a = e(dims, "111");
        let b = e(dims, "222");
        assert!(a.wedge(&a).unwrap().is_zero());
        assert_eq!(a.wedge(&b).unwrap(), e(dims, "111,222"));
        assert_eq!(b.wedge(&a).unwrap(), -&e(dims, "111,222"));
        assert!(a.wedge(&Multivector::zero(Dims::new(3, 3).unwrap())).is_err());
    }

    #[test]
    fn interior_basics() {
        let dims = d32();
        let a = e(dims, "111");
        assert_eq!(a.interior(&a, Contraction::Adjoint).unwrap(), Multivector::one(dims));
        assert!(a.interior(&e(dims, "222"), Contraction::Adjoint).unwrap().is_zero());
        // e*_{222} ⌟ e_{111,222}: e_{111,222} = -e_{222} ∧ e_{111}
        assert_eq!(e(dims, "222").interior(&e(dims, "111,222"), Contraction::Adjoint).unwrap(), -&e(dims, "111"));
        assert_eq!(e(dims, "222").interior(&e(dims, "111,222"), Contraction::Unsigned).unwrap(), e(dims, "111"));
    }

    #[test]
    fn hodge_of_scalar_is_volume() {
        let dims = d32();
        assert_eq!(Multivector::one(dims).hodge_star().unwrap(), Multivector::basis(CubeSet::full(dims)));
        let mixed = &Multivector::one(dims) + &e(dims, "111");
        assert_eq!(mixed.hodge_star(), Err(Error::NotHomogeneous));
    }

    #[test]
    fn hodge_twice_is_signed_identity() {
        let dims = d32();
        for bits in 0..=dims.full_mask() {
            let x = CubeSet::from_mask(dims, bits).unwrap();
            let n = x.len();
            let v = Multivector::basis(x);
            let twice = v.hodge_star().unwrap().hodge_star().unwrap();
            let sign = if (n * (8 - n)) % 2 == 0 { 1 } else { -1 };
            assert_eq!(twice, v.scale(&BigInt::from(sign)));
        }
    }

    #[test]
    fn mask_sign_matches_iterated_single_cells() {
        let dims = Dims::new(2, 3).unwrap();
        for bits in [0b101101101u128, 0b11, 0b110010001] {
            let x = CubeSet::from_mask(dims, bits).unwrap();
            let ranks: Vec<usize> = x.ranks().collect();
            assert_eq!(basis_from_cells(dims, &ranks).unwrap(), Multivector::basis(x));
            let mut rev = ranks.clone();
            rev.reverse();
            let flips = ranks.len() * (ranks.len().saturating_sub(1)) / 2;
            let sign = if flips % 2 == 0 { 1 } else { -1 };
            assert_eq!(basis_from_cells(dims, &rev).unwrap(), Multivector::basis(x).scale(&BigInt::from(sign)));
        }
    }

    #[test]
    fn json_round_trip() {
        let dims = d32();
        let v = &e(dims, "111,222").scale(&BigInt::from(-7)) + &e(dims, "121");
        let j = v.to_json();
        assert_eq!(Multivector::from_json(dims, &j).unwrap(), v);
        assert!(j.to_string().contains("\"-7\""));
    }
}
