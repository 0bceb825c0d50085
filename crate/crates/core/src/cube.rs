//! Cells of the cube `[k]^d`, subsets of it, marginals and magic sets.
//!
//! A cell is identified with its mixed-radix (base `k`) lexicographic rank in
//! `[0, k^d)`; a [`CubeSet`] is a bit mask over ranks, so cubes are limited to
//! `k^d ≤ 128` cells.

use std::cmp::Ordering;
use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};

pub const MAX_CELLS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dims {
    pub d: usize,
    pub k: usize,
}

impl Dims {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if d == 0 || k == 0 {
            return Err(Error::Dimensions(format!("d={d}, k={k} must be positive")));
        }
        match k.checked_pow(d as u32) {
            Some(n) if n <= MAX_CELLS => Ok(Dims { d, k }),
            _ => Err(Error::Dimensions(format!("[{k}]^{d} has more than {MAX_CELLS} cells"))),
        }
    }

    pub fn cells(&self) -> usize {
        self.k.pow(self.d as u32)
    }

    /// Cells per slice, `k^{d-1}`.
    pub fn slice_size(&self) -> usize {
        self.k.pow(self.d as u32 - 1)
    }

    /// Rank of a cell given by 1-based coordinates.
    pub fn rank(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.d || coords.iter().any(|&c| c == 0 || c > self.k) {
            return Err(Error::OutOfRange(format!("cell {coords:?} outside [{}]^{}", self.k, self.d)));
        }
        Ok(coords.iter().fold(0, |acc, &c| acc * self.k + (c - 1)))
    }

    /// 1-based coordinates of the cell with the given rank.
    pub fn coords(&self, rank: usize) -> Vec<usize> {
        let mut out = vec![0; self.d];
        let mut r = rank;
        for slot in out.iter_mut().rev() {
            *slot = r % self.k + 1;
            r /= self.k;
        }
        out
    }

    /// 1-based coordinate of `rank` in direction `dir` (0-based).
    pub fn coord(&self, rank: usize, dir: usize) -> usize {
        (rank / self.k.pow((self.d - 1 - dir) as u32)) % self.k + 1
    }

    /// Mask of the slice `{x : x_dir = value}` (`dir` 0-based, `value` 1-based).
    pub fn slice_mask(&self, dir: usize, value: usize) -> u128 {
        (0..self.cells()).filter(|&r| self.coord(r, dir) == value).fold(0, |m, r| m | 1u128 << r)
    }

    /// All `d·k` slice masks, indexed `dir * k + (value - 1)`.
    pub fn slice_masks(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.d * self.k];
        for r in 0..self.cells() {
            for dir in 0..self.d {
                out[dir * self.k + self.coord(r, dir) - 1] |= 1u128 << r;
            }
        }
        out
    }

    pub fn full_mask(&self) -> u128 {
        if self.cells() == 128 {
            u128::MAX
        } else {
            (1u128 << self.cells()) - 1
        }
    }
}

/// A point of `[k]^d` with 1-based coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub coords: Vec<usize>,
}

impl Cell {
    pub fn new(coords: Vec<usize>) -> Self {
        Cell { coords }
    }

    /// Reflection `x ↦ (k+1-x_1, …, k+1-x_d)`.
    pub fn antipode(&self, k: usize) -> Cell {
        Cell { coords: self.coords.iter().map(|&c| k + 1 - c).collect() }
    }
}

/// A subset of `[k]^d`; iteration is in lexicographic order of cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubeSet {
    dims: Dims,
    bits: u128,
}

/// Lexicographic comparison of the increasing rank sequences of two masks.
pub fn lex_cmp_masks(a: u128, b: u128) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let x = (a ^ b).trailing_zeros();
    if a >> x & 1 == 1 {
        // b lacks x: b is either a proper prefix of a or continues with something larger
        if b >> x == 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    } else if a >> x == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl Ord for CubeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dims.cmp(&other.dims).then_with(|| lex_cmp_masks(self.bits, other.bits))
    }
}

impl PartialOrd for CubeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CubeSet {
    pub fn empty(dims: Dims) -> Self {
        CubeSet { dims, bits: 0 }
    }

    pub fn full(dims: Dims) -> Self {
        CubeSet { dims, bits: dims.full_mask() }
    }

    pub fn from_mask(dims: Dims, bits: u128) -> Result<Self> {
        if bits & !dims.full_mask() != 0 {
            return Err(Error::OutOfRange(format!("mask has cells beyond [{}]^{}", dims.k, dims.d)));
        }
        Ok(CubeSet { dims, bits })
    }

    pub fn from_ranks(dims: Dims, ranks: &[usize]) -> Result<Self> {
        let mut bits = 0u128;
        for &r in ranks {
            if r >= dims.cells() {
                return Err(Error::OutOfRange(format!("rank {r} outside [{}]^{}", dims.k, dims.d)));
            }
            bits |= 1u128 << r;
        }
        Ok(CubeSet { dims, bits })
    }

    pub fn from_cells<I, C>(dims: Dims, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[usize]>,
    {
        let mut bits = 0u128;
        for c in cells {
            bits |= 1u128 << dims.rank(c.as_ref())?;
        }
        Ok(CubeSet { dims, bits })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn mask(&self) -> u128 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains_rank(&self, r: usize) -> bool {
        r < 128 && self.bits >> r & 1 == 1
    }

    /// Ranks in increasing (lexicographic) order.
    pub fn ranks(&self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let r = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(r)
        })
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.ranks().map(|r| Cell::new(self.dims.coords(r))).collect()
    }

    pub fn complement(&self) -> CubeSet {
        CubeSet { dims: self.dims, bits: self.dims.full_mask() & !self.bits }
    }

    pub fn is_subset(&self, other: &CubeSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: &CubeSet) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(&self, other: &CubeSet) -> CubeSet {
        CubeSet { dims: self.dims, bits: self.bits | other.bits }
    }

    pub fn difference(&self, other: &CubeSet) -> CubeSet {
        CubeSet { dims: self.dims, bits: self.bits & !other.bits }
    }

    /// Digit-string text form, e.g. `111,222`; requires `k ≤ 9`.
    pub fn to_text(&self) -> Result<String> {
        if self.dims.k > 9 {
            return Err(Error::OutOfRange("digit text form needs k ≤ 9".into()));
        }
        Ok(self
            .ranks()
            .map(|r| self.dims.coords(r).iter().map(|c| c.to_string()).collect::<String>())
            .collect::<Vec<_>>()
            .join(","))
    }

    /// Parses `{(1,1,1),(2,2,2)}` or the digit form `111,222`.
    pub fn parse_text(dims: Dims, s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if s.is_empty() {
            return Ok(CubeSet::empty(dims));
        }
        let bad = |tok: &str| Error::Parse(format!("bad cell {tok:?}"));
        let mut cells = Vec::new();
        if s.contains('(') {
            for group in s.split(')').map(str::trim).filter(|g| !g.is_empty()) {
                let inner = group.trim_start_matches(',').trim().strip_prefix('(').ok_or_else(|| bad(group))?;
                let coords = inner
                    .split(',')
                    .map(|c| c.trim().parse::<usize>().map_err(|_| bad(group)))
                    .collect::<Result<Vec<_>>>()?;
                cells.push(coords);
            }
        } else {
            for tok in s.split(',').map(str::trim) {
                let coords = tok
                    .chars()
                    .map(|c| c.to_digit(10).map(|v| v as usize).ok_or_else(|| bad(tok)))
                    .collect::<Result<Vec<_>>>()?;
                cells.push(coords);
            }
        }
        CubeSet::from_cells(dims, cells)
    }

    /// JSON form: array of coordinate arrays.
    pub fn to_json(&self) -> Value {
        Value::Array(self.ranks().map(|r| Value::from(self.dims.coords(r))).collect())
    }

    pub fn from_json(dims: Dims, v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("cube set must be a JSON array".into()))?;
        let mut cells = Vec::with_capacity(arr.len());
        for c in arr {
            let coords: Vec<usize> = serde_json::from_value(c.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            cells.push(coords);
        }
        CubeSet::from_cells(dims, cells)
    }
}

impl fmt::Display for CubeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .ranks()
            .map(|r| format!("({})", self.dims.coords(r).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", cells.join(","))
    }
}

/// Per-direction slice counts `s_ℓ(X, i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marginals(pub Vec<Vec<u32>>);

impl Marginals {
    /// `Some(n)` when every slice count equals `n`.
    pub fn magic_magnitude(&self) -> Option<u32> {
        let first = *self.0.first()?.first()?;
        self.0.iter().flatten().all(|&v| v == first).then_some(first)
    }
}

pub fn marginals(x: &CubeSet) -> Marginals {
    let dims = x.dims();
    let mut out = vec![vec![0u32; dims.k]; dims.d];
    for r in x.ranks() {
        for (dir, row) in out.iter_mut().enumerate() {
            row[dims.coord(r, dir) - 1] += 1;
        }
    }
    Marginals(out)
}

/// Magnitude of `x` if it is a magic set.
pub fn magic_magnitude(x: &CubeSet) -> Option<u32> {
    marginals(x).magic_magnitude()
}

/// All subsets of the cube with the prescribed marginals, in lexicographic order.
/// Fails with [`Error::Budget`] once more than `budget` sets are found.
pub fn enumerate_with_marginals(dims: Dims, weight: &[Vec<u32>], budget: usize) -> Result<Vec<CubeSet>> {
    if weight.len() != dims.d || weight.iter().any(|w| w.len() != dims.k) {
        return Err(Error::Dimensions(format!("weight must be {} vectors of length {}", dims.d, dims.k)));
    }
    let m: u32 = weight[0].iter().sum();
    if weight.iter().any(|w| w.iter().sum::<u32>() != m) {
        return Err(Error::SizeMismatch(format!("weight {weight:?} has components with different sums")));
    }
    let mut out: Vec<u128> = Vec::new();
    if weight.iter().flatten().any(|&v| v as usize > dims.slice_size()) {
        return Ok(Vec::new());
    }
    let n = dims.cells();
    let slices: Vec<Vec<usize>> = (0..n).map(|r| (0..dims.d).map(|dir| dir * dims.k + dims.coord(r, dir) - 1).collect()).collect();
    let masks = dims.slice_masks();
    let mut need: Vec<u32> = weight.iter().flatten().copied().collect();
    let mut search = MarginalSearch { n, slices: &slices, masks: &masks, budget, out: &mut out, overflow: false };
    search.run(0, 0u128, m, &mut need);
    if search.overflow {
        return Err(Error::Budget(format!("more than {budget} sets with marginals {weight:?}")));
    }
    Ok(out.into_iter().map(|bits| CubeSet { dims, bits }).collect())
}

struct MarginalSearch<'a> {
    n: usize,
    slices: &'a [Vec<usize>],
    masks: &'a [u128],
    budget: usize,
    out: &'a mut Vec<u128>,
    overflow: bool,
}

impl MarginalSearch<'_> {
    fn run(&mut self, r: usize, bits: u128, remaining: u32, need: &mut [u32]) {
        if self.overflow {
            return;
        }
        if remaining == 0 {
            if self.out.len() >= self.budget {
                self.overflow = true;
                return;
            }
            self.out.push(bits);
            return;
        }
        if r >= self.n || (self.n - r) < remaining as usize {
            return;
        }
        let sl = &self.slices[r];
        if sl.iter().all(|&s| need[s] > 0) {
            for &s in sl {
                need[s] -= 1;
            }
            self.run(r + 1, bits | 1u128 << r, remaining - 1, need);
            for &s in sl {
                need[s] += 1;
            }
        }
        // skipping r: each of its slices must still be fillable from later cells
        let later = if r + 1 >= 128 { 0 } else { !0u128 << (r + 1) };
        if sl.iter().all(|&s| need[s] <= (self.masks[s] & later).count_ones()) {
            self.run(r + 1, bits, remaining, need);
        }
    }
}

/// `B_{d,k}(n)`: magic sets of magnitude `n`, in lexicographic order.
pub fn enumerate_magic_sets(dims: Dims, n: u32, budget: usize) -> Result<Vec<CubeSet>> {
    if n as usize > dims.slice_size() {
        return Err(Error::OutOfRange(format!("magnitude {n} exceeds k^(d-1) = {}", dims.slice_size())));
    }
    let weight = vec![vec![n; dims.k]; dims.d];
    enumerate_with_marginals(dims, &weight, budget)
}

/// `T1 ⊕ T2`: `T2` shifted by `k1` in every coordinate, placed next to `T1`.
pub fn direct_sum(t1: &CubeSet, t2: &CubeSet) -> Result<CubeSet> {
    let (a, b) = (t1.dims(), t2.dims());
    if a.d != b.d {
        return Err(Error::DimensionMismatch { d1: a.d, k1: a.k, d2: b.d, k2: b.k });
    }
    let n1 = magic_magnitude(t1).ok_or_else(|| Error::NotMagic(t1.to_string()))?;
    let n2 = magic_magnitude(t2).ok_or_else(|| Error::NotMagic(t2.to_string()))?;
    if n1 != n2 {
        return Err(Error::SizeMismatch(format!("magnitudes {n1} and {n2} differ")));
    }
    let dims = Dims::new(a.d, a.k + b.k)?;
    let shifted = |c: Vec<usize>, by: usize| c.into_iter().map(|x| x + by).collect::<Vec<_>>();
    let cells = t1.ranks().map(|r| a.coords(r)).chain(t2.ranks().map(|r| shifted(b.coords(r), a.k)));
    CubeSet::from_cells(dims, cells)
}
