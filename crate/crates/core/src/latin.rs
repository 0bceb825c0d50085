//! Partial Latin hypercubes of a magic type and Alon–Tarsi numbers.
//!
//! Cells of the type are filled in lexicographic order, so a newly placed
//! value is always the last entry of each of its `d` slice permutations; the
//! inversions it adds are the used values above it in those slices.
//!
//! Relabeling values by `σ ∈ S_n` composes each of the `dk` slice
//! permutations with `σ` and so multiplies the sign by `sgn(σ)^{dk}`.
//! [`at_number`] enumerates one hypercube per relabeling orbit (values in
//! order of first occurrence) and scales the counts accordingly;
//! [`at_number_plain`] counts every hypercube.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{magic_magnitude, CubeSet};
use crate::error::{Error, Result};

pub const DEFAULT_CELL_BUDGET: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLatinHypercube {
    pub shape: CubeSet,
    /// Value in `1..=n` for each cell of `shape`, in lexicographic cell order.
    pub values: Vec<u32>,
}

impl PartialLatinHypercube {
    /// Product of the signs of all slice permutations, recomputed from scratch.
    pub fn sign(&self) -> i32 {
        let dims = self.shape.dims();
        let ranks: Vec<usize> = self.shape.ranks().collect();
        let mut sign = 1;
        for dir in 0..dims.d {
            for value in 1..=dims.k {
                let seq: Vec<u32> = ranks
                    .iter()
                    .zip(&self.values)
                    .filter(|(&r, _)| dims.coord(r, dir) == value)
                    .map(|(_, &v)| v)
                    .collect();
                let inversions: usize =
                    (0..seq.len()).map(|i| seq[i + 1..].iter().filter(|&&w| w < seq[i]).count()).sum();
                if inversions % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        sign
    }

    /// Every slice meets the type in cells carrying each of `1..=n` once.
    pub fn is_valid(&self) -> bool {
        let dims = self.shape.dims();
        let Some(n) = magic_magnitude(&self.shape) else { return false };
        let ranks: Vec<usize> = self.shape.ranks().collect();
        (0..dims.d).all(|dir| {
            (1..=dims.k).all(|value| {
                let mut seen: Vec<u32> = ranks
                    .iter()
                    .zip(&self.values)
                    .filter(|(&r, _)| dims.coord(r, dir) == value)
                    .map(|(_, &v)| v)
                    .collect();
                seen.sort_unstable();
                seen == (1..=n).collect::<Vec<_>>()
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SignedCount {
    #[serde(serialize_with = "as_decimal")]
    pub positive: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub negative: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub at: BigInt,
}

fn as_decimal<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl SignedCount {
    fn from_counts(positive: BigInt, negative: BigInt) -> Self {
        SignedCount { at: &positive - &negative, positive, negative }
    }
}

struct Search {
    n: u32,
    slots: usize,
    /// Slice indices (`dir * k + value - 1`) of each cell, in fill order.
    slices: Vec<Vec<usize>>,
}

impl Search {
    fn new(t: &CubeSet) -> Self {
        let dims = t.dims();
        let n = magic_magnitude(t).unwrap_or(0);
        let slices =
            t.ranks().map(|r| (0..dims.d).map(|dir| dir * dims.k + dims.coord(r, dir) - 1).collect()).collect();
        Search { n, slots: dims.d * dims.k, slices }
    }

    /// Places value `v` at cell `i`; returns the parity of inversions added.
    fn place(&self, i: usize, v: u32, used: &mut [u64]) -> Option<u32> {
        let bit = 1u64 << (v - 1);
        let sl = &self.slices[i];
        if sl.iter().any(|&s| used[s] & bit != 0) {
            return None;
        }
        let above = !((bit << 1) - 1);
        let mut parity = 0;
        for &s in sl {
            parity += (used[s] & above).count_ones();
            used[s] |= bit;
        }
        Some(parity & 1)
    }

    fn unplace(&self, i: usize, v: u32, used: &mut [u64]) {
        for &s in &self.slices[i] {
            used[s] &= !(1u64 << (v - 1));
        }
    }

    fn walk(&self, i: usize, parity: u32, used: &mut [u64], values: &mut Vec<u32>, f: &mut dyn FnMut(&[u32], i32)) {
        if i == self.slices.len() {
            f(values, if parity == 0 { 1 } else { -1 });
            return;
        }
        for v in 1..=self.n {
            if let Some(p) = self.place(i, v, used) {
                values.push(v);
                self.walk(i + 1, parity ^ p, used, values, f);
                values.pop();
                self.unplace(i, v, used);
            }
        }
    }

    /// Counts hypercubes by sign parity. With `canonical`, a value may only
    /// be used once all smaller values have appeared.
    fn count(&self, i: usize, parity: u32, max_used: u32, canonical: bool, used: &mut [u64], acc: &mut [u128; 2]) {
        if i == self.slices.len() {
            acc[parity as usize] += 1;
            return;
        }
        let top = if canonical { self.n.min(max_used + 1) } else { self.n };
        for v in 1..=top {
            if let Some(p) = self.place(i, v, used) {
                self.count(i + 1, parity ^ p, max_used.max(v), canonical, used, acc);
                self.unplace(i, v, used);
            }
        }
    }

    /// Partial states after the first `depth` cells, used to split work.
    fn prefixes(&self, depth: usize, canonical: bool) -> Vec<(u32, u32, Vec<u64>)> {
        let mut out = Vec::new();
        let mut used = vec![0u64; self.slots()];
        self.collect(0, depth.min(self.slices.len()), 0, 0, canonical, &mut used, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn collect(
        &self,
        i: usize,
        depth: usize,
        parity: u32,
        max_used: u32,
        canonical: bool,
        used: &mut [u64],
        out: &mut Vec<(u32, u32, Vec<u64>)>,
    ) {
        if i == depth {
            out.push((parity, max_used, used.to_vec()));
            return;
        }
        let top = if canonical { self.n.min(max_used + 1) } else { self.n };
        for v in 1..=top {
            if let Some(p) = self.place(i, v, used) {
                self.collect(i + 1, depth, parity ^ p, max_used.max(v), canonical, used, out);
                self.unplace(i, v, used);
            }
        }
    }

    fn slots(&self) -> usize {
        self.slots
    }

    fn run(&self, canonical: bool) -> [u128; 2] {
        const SPLIT_DEPTH: usize = 4;
        let depth = SPLIT_DEPTH.min(self.slices.len());
        self.prefixes(depth, canonical)
            .into_par_iter()
            .map(|(parity, max_used, mut used)| {
                let mut acc = [0u128; 2];
                self.count(depth, parity, max_used, canonical, &mut used, &mut acc);
                acc
            })
            .reduce(|| [0, 0], |a, b| [a[0] + b[0], a[1] + b[1]])
    }
}

fn check_type(t: &CubeSet, budget: usize) -> Result<()> {
    if magic_magnitude(t).is_none() {
        return Err(Error::NotMagic(t.to_string()));
    }
    if t.len() / t.dims().k.max(1) > 64 {
        return Err(Error::OutOfRange("magnitude above 64 is not supported".into()));
    }
    if t.len() > budget {
        return Err(Error::Budget(format!("type has {} cells, budget is {budget}", t.len())));
    }
    Ok(())
}

/// Calls `f(values, sign)` for every partial Latin hypercube of type `t`, in
/// lexicographic order of value sequences.
pub fn for_each_latin(t: &CubeSet, budget: usize, mut f: impl FnMut(&[u32], i32)) -> Result<()> {
    check_type(t, budget)?;
    let search = Search::new(t);
    let mut used = vec![0u64; search.slots()];
    search.walk(0, 0, &mut used, &mut Vec::with_capacity(t.len()), &mut f);
    Ok(())
}

pub fn enumerate_latin(t: &CubeSet, budget: usize) -> Result<Vec<PartialLatinHypercube>> {
    let mut out = Vec::new();
    for_each_latin(t, budget, |values, _| out.push(PartialLatinHypercube { shape: *t, values: values.to_vec() }))?;
    Ok(out)
}

/// `AT(T)`: signed count of partial Latin hypercubes of type `t`.
pub fn at_number(t: &CubeSet, budget: usize) -> Result<SignedCount> {
    check_type(t, budget)?;
    let search = Search::new(t);
    let [even, odd] = search.run(true);
    let dims = t.dims();
    let orbit: BigInt = (1..=search.n).map(BigInt::from).product();
    if search.n >= 2 && (dims.d * dims.k) % 2 == 1 {
        // odd and even relabelings of one hypercube have opposite signs
        let half: BigInt = orbit / 2 * (even + odd);
        return Ok(SignedCount::from_counts(half.clone(), half));
    }
    Ok(SignedCount::from_counts(&orbit * even, orbit * odd))
}

/// `AT(T)` by counting every hypercube, without the relabeling reduction.
pub fn at_number_plain(t: &CubeSet, budget: usize) -> Result<SignedCount> {
    check_type(t, budget)?;
    let [even, odd] = Search::new(t).run(false);
    Ok(SignedCount::from_counts(even.into(), odd.into()))
}

/// `AT_d(k) = AT([k]^d)`.
pub fn at_full(d: usize, k: usize, budget: usize) -> Result<SignedCount> {
    at_number(&CubeSet::full(crate::cube::Dims::new(d, k)?), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{direct_sum, enumerate_magic_sets, Dims};

    fn d32() -> Dims {
        Dims::new(3, 2).unwrap()
    }

    #[test]
    fn empty_and_single_value_types() {
        let dims = d32();
        let empty = enumerate_latin(&CubeSet::empty(dims), 32).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(at_number(&CubeSet::empty(dims), 32).unwrap().at, 1.into());
        let pair = CubeSet::parse_text(dims, "111,222").unwrap();
        let all = enumerate_latin(&pair, 32).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].values, vec![1, 1]);
        assert_eq!(all[0].sign(), 1);
    }

    #[test]
    fn full_binary_cube_is_all_positive() {
        let full = CubeSet::full(d32());
        let all = enumerate_latin(&full, 32).unwrap();
        let c = at_number(&full, 32).unwrap();
        assert_eq!(c.positive, BigInt::from(all.len()));
        assert_eq!(c.negative, 0.into());
        assert_eq!(c.at, 24.into());
        for h in &all {
            assert!(h.is_valid());
            assert_eq!(h.sign(), 1);
        }
    }

    #[test]
    fn incremental_sign_matches_recomputation() {
        let dims = Dims::new(3, 3).unwrap();
        let t = &enumerate_magic_sets(dims, 2, 10_000).unwrap()[7];
        for_each_latin(t, 32, |values, sign| {
            let h = PartialLatinHypercube { shape: *t, values: values.to_vec() };
            assert!(h.is_valid());
            assert_eq!(h.sign(), sign);
        })
        .unwrap();
    }

    #[test]
    fn orbit_reduction_matches_plain_count() {
        for (d, k) in [(3, 2), (2, 3), (2, 4), (3, 1)] {
            let t = CubeSet::full(Dims::new(d, k).unwrap());
            assert_eq!(at_number(&t, 32).unwrap(), at_number_plain(&t, 32).unwrap(), "d={d} k={k}");
        }
        let dims = Dims::new(3, 3).unwrap();
        for n in 1..=3 {
            for t in enumerate_magic_sets(dims, n, 100_000).unwrap().iter().step_by(97) {
                assert_eq!(at_number(t, 32).unwrap(), at_number_plain(t, 32).unwrap(), "{t}");
            }
        }
    }

    #[test]
    fn odd_side_cancels() {
        let c = at_full(3, 3, 32).unwrap();
        assert_eq!(c.positive, BigInt::from(40u64 * 362_880 / 2));
        assert_eq!(c.at, 0.into());
        assert_eq!(c.positive, c.negative);
        assert!(c.positive > 0.into());
    }

    /// Latin squares of order `n` assembled row by row from permutations,
    /// signed by the product of row and column permutation signs.
    fn latin_squares_by_rows(n: usize) -> (u64, u64) {
        let perms = crate::cayley::permutations_with_sign(n);
        let (mut pos, mut neg) = (0, 0);
        let mut idx = vec![0usize; n];
        loop {
            let rows: Vec<&Vec<usize>> = idx.iter().map(|&i| &perms[i].0).collect();
            let cols_ok = (0..n).all(|c| {
                let mut seen = vec![false; n];
                rows.iter().all(|r| !std::mem::replace(&mut seen[r[c]], true))
            });
            if cols_ok {
                let mut sign: i32 = idx.iter().map(|&i| perms[i].1).product();
                for c in 0..n {
                    let col: Vec<usize> = rows.iter().map(|r| r[c]).collect();
                    let inv: usize = (0..n).map(|i| col[i + 1..].iter().filter(|&&w| w < col[i]).count()).sum();
                    if inv % 2 == 1 {
                        sign = -sign;
                    }
                }
                if sign > 0 {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
            let mut p = n;
            loop {
                if p == 0 {
                    return (pos, neg);
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < perms.len() {
                    break;
                }
                idx[p] = 0;
            }
        }
    }

    #[test]
    fn latin_squares_match_row_assembly() {
        for n in [2, 3, 4] {
            let (pos, neg) = latin_squares_by_rows(n);
            let c = at_full(2, n, 32).unwrap();
            assert_eq!((c.positive, c.negative), (pos.into(), neg.into()), "n = {n}");
        }
    }

    #[test]
    fn direct_sum_of_binary_cubes() {
        let full = CubeSet::full(d32());
        let t = direct_sum(&full, &full).unwrap();
        assert_eq!(at_number(&t, 32).unwrap().at, 576.into());
    }

    #[test]
    fn rejects_non_magic_and_oversized() {
        let dims = d32();
        assert!(matches!(at_number(&CubeSet::parse_text(dims, "111").unwrap(), 32), Err(Error::NotMagic(_))));
        assert!(matches!(at_number(&CubeSet::full(dims), 4), Err(Error::Budget(_))));
    }
}
