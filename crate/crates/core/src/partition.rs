//! Integer partitions and tuples of partitions.
//!
//! Text form: parts separated by commas (`4,2`), tuple entries separated by
//! semicolons (`4,2;2,2,2;3,2,1`). The empty partition is the empty string,
//! so `;;` is the triple of empty partitions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(Error::Partition(format!("{parts:?} has an interior zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Partition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The rectangle with `rows` parts equal to `cols`.
    pub fn rectangle(rows: usize, cols: u32) -> Self {
        if cols == 0 {
            return Partition::empty();
        }
        Partition(vec![cols; rows])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest part, 0 for the empty partition.
    pub fn first(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Part `i` (0-based), 0 past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first() as usize;
        let mut out = vec![0u32; cols];
        for &p in &self.0 {
            for c in out.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition(out)
    }

    /// Number of parts equal to `k`.
    pub fn count_parts_equal(&self, k: u32) -> usize {
        self.0.iter().filter(|&&p| p == k).count()
    }

    /// Whether the Young diagram fits in `rows` rows and `cols` columns.
    pub fn fits_in(&self, rows: usize, cols: u32) -> bool {
        self.len() <= rows && self.first() <= cols
    }

    /// Whether the diagram of `self` is contained in that of `other`.
    pub fn contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Complement inside the `rows × cols` box, `(cols - λ_rows, …, cols - λ_1)`.
    pub fn complement_in_box(&self, rows: usize, cols: u32) -> Result<Partition> {
        if !self.fits_in(rows, cols) {
            return Err(Error::Partition(format!("{self} does not fit in a {rows}x{cols} box")));
        }
        let parts = (0..rows).rev().map(|i| cols - self.part(i)).collect();
        Partition::new(parts)
    }

    /// Applies `ρ_k^n`: prepends `n` parts equal to `k`, or removes `|n|` leading
    /// parts equal to `k` when `n < 0`.
    pub fn rho(&self, k: u32, n: i64) -> Result<Partition> {
        if self.first() > k {
            return Err(Error::Partition(format!("{self} has a part larger than {k}")));
        }
        if n >= 0 {
            let mut parts = vec![k; n as usize];
            parts.extend_from_slice(&self.0);
            return Partition::new(parts);
        }
        let drop = n.unsigned_abs() as usize;
        if k == 0 || self.count_parts_equal(k) < drop {
            return Err(Error::Partition(format!("cannot remove {drop} parts equal to {k} from {self}")));
        }
        Ok(Partition(self.0[drop..].to_vec()))
    }

    /// All partitions of `m` with parts at most `max_part` and at most `max_len` parts,
    /// in reverse lexicographic order (largest first part first).
    pub fn all(m: u32, max_part: u32, max_len: usize) -> Vec<Partition> {
        fn rec(rem: u32, cap: u32, len_left: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            if len_left == 0 {
                return;
            }
            for p in (1..=cap.min(rem)).rev() {
                cur.push(p);
                rec(rem - p, p, len_left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, max_part, max_len, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("part {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// A `d`-tuple of partitions, the label of a Kronecker coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionTuple(Vec<Partition>);

impl PartitionTuple {
    pub fn new(entries: Vec<Partition>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Partition("a tuple needs at least one entry".into()));
        }
        Ok(PartitionTuple(entries))
    }

    /// Tuple whose entries may have different sizes is rejected.
    pub fn new_equal_size(entries: Vec<Partition>) -> Result<Self> {
        let t = PartitionTuple::new(entries)?;
        t.common_size()?;
        Ok(t)
    }

    pub fn repeat(p: Partition, d: usize) -> Self {
        PartitionTuple(vec![p; d])
    }

    pub fn entries(&self) -> &[Partition] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn common_size(&self) -> Result<u32> {
        let m = self.0[0].size();
        if self.0.iter().any(|p| p.size() != m) {
            return Err(Error::SizeMismatch(format!("entries of {self} have different sizes")));
        }
        Ok(m)
    }

    pub fn conjugate(&self) -> PartitionTuple {
        PartitionTuple(self.0.iter().map(Partition::conjugate).collect())
    }

    pub fn rho(&self, k: u32, n: i64) -> Result<PartitionTuple> {
        Ok(PartitionTuple(self.0.iter().map(|p| p.rho(k, n)).collect::<Result<_>>()?))
    }

    pub fn complement_in_box(&self, rows: usize, cols: u32) -> Result<PartitionTuple> {
        Ok(PartitionTuple(
            self.0.iter().map(|p| p.complement_in_box(rows, cols)).collect::<Result<_>>()?,
        ))
    }

    /// `a = max_i ℓ(λ^(i))`.
    pub fn max_len(&self) -> usize {
        self.0.iter().map(Partition::len).max().unwrap_or(0)
    }

    /// `b = min_i #{parts of λ^(i) equal to k}`.
    pub fn min_parts_equal(&self, k: u32) -> usize {
        self.0.iter().map(|p| p.count_parts_equal(k)).min().unwrap_or(0)
    }

    pub fn max_part(&self) -> u32 {
        self.0.iter().map(Partition::first).max().unwrap_or(0)
    }

    pub fn permuted(&self, order: &[usize]) -> PartitionTuple {
        PartitionTuple(order.iter().map(|&i| self.0[i].clone()).collect())
    }

    /// All `d`-tuples of partitions of `m` with parts ≤ `max_part` and length ≤ `max_len`.
    pub fn all(d: usize, m: u32, max_part: u32, max_len: usize) -> Vec<PartitionTuple> {
        let parts = Partition::all(m, max_part, max_len);
        let mut out: Vec<Vec<Partition>> = vec![Vec::new()];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    parts.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.push(p.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(PartitionTuple).collect()
    }
}

impl fmt::Display for PartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl FromStr for PartitionTuple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PartitionTuple::new(s.split(';').map(str::parse).collect::<Result<_>>()?)
    }
}
