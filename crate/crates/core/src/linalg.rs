//! Exact linear algebra over the integers: sparse fraction-free row
//! reduction with kernels, dense Bareiss rank, and ranks modulo primes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Sorted `(column, nonzero value)` pairs.
pub type SparseRow = Vec<(usize, BigInt)>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    /// Adds a row given as arbitrary `(column, value)` pairs; repeated
    /// columns are summed and zeros dropped.
    pub fn push_row<I: IntoIterator<Item = (usize, BigInt)>>(&mut self, entries: I) {
        let mut acc: Vec<(usize, BigInt)> = entries.into_iter().collect();
        acc.sort_by_key(|e| e.0);
        let mut row: SparseRow = Vec::with_capacity(acc.len());
        for (c, v) in acc {
            assert!(c < self.ncols, "column {c} out of range");
            match row.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| !e.1.is_zero());
        self.rows.push(row);
    }

    pub fn from_dense(rows: &[Vec<BigInt>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(ncols);
        for r in rows {
            m.push_row(r.iter().cloned().enumerate());
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![BigInt::zero(); self.ncols];
                for (c, v) in r {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<SparseRow> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (c, v) in r {
                cols[*c].push((i, v.clone()));
            }
        }
        SparseMatrix { ncols: self.rows.len(), rows: cols }
    }
}

/// Divides a row by the gcd of its entries and makes its leading entry positive.
pub fn make_primitive(row: &mut [(usize, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// `a·x − b·y` for sparse rows.
fn combine(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(row: &[(usize, BigInt)], col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// Reduced row echelon form with primitive integer rows: each pivot column
/// is zero in every other row.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    /// `(pivot column, row)`; the row's entry at the pivot column is positive.
    rows: Vec<(usize, SparseRow)>,
    pivot_index: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivot_index: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.0).collect();
        p.sort_unstable();
        p
    }

    /// Reduces `row` against the current pivots; returns the remainder
    /// (zero iff `row` lies in the row span).
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut k = 0;
        while k < row.len() {
            let col = row[k].0;
            if let Some(&pi) = self.pivot_index.get(&col) {
                let (_, prow) = &self.rows[pi];
                let p = entry(prow, col).expect("pivot entry");
                let b = row[k].1.clone();
                let g = p.gcd(&b);
                row = combine(&(p / &g), &row, &(b / &g), prow);
                if !row.is_empty() {
                    make_primitive(&mut row);
                }
                k = row.partition_point(|e| e.0 <= col);
            } else {
                k += 1;
            }
        }
        row
    }

    /// Adds a row; returns `true` when it raised the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        make_primitive(&mut row);
        let col = row[0].0;
        let p = row[0].1.clone();
        for (_, other) in self.rows.iter_mut() {
            if let Some(b) = entry(other, col) {
                let b = b.clone();
                let g = p.gcd(&b);
                let mut next = combine(&(&p / &g), other, &(b / &g), &row);
                // the leading entry is the pivot, which make_primitive keeps positive
                make_primitive(&mut next);
                *other = next;
            }
        }
        self.pivot_index.insert(col, self.rows.len());
        self.rows.push((col, row));
        true
    }

    /// Primitive integer basis of the null space `{x : A x = 0}`, one vector
    /// per free column `f` with `x_f > 0` and `x_g = 0` at the other free columns.
    pub fn kernel_basis(&self) -> Vec<(usize, SparseRow)> {
        let mut by_col: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, (_, r)) in self.rows.iter().enumerate() {
            for (c, _) in r {
                if !self.pivot_index.contains_key(c) {
                    by_col.entry(*c).or_default().push(i);
                }
            }
        }
        let mut out = Vec::new();
        for f in (0..self.ncols).filter(|c| !self.pivot_index.contains_key(c)) {
            let rows = by_col.get(&f).map(Vec::as_slice).unwrap_or(&[]);
            let mut l = BigInt::one();
            for &i in rows {
                let (pc, r) = &self.rows[i];
                let p = entry(r, *pc).expect("pivot entry");
                let a = entry(r, f).expect("free entry");
                l = l.lcm(&(p / p.gcd(a)));
            }
            let mut v: SparseRow = vec![(f, l.clone())];
            for &i in rows {
                let (pc, r) = &self.rows[i];
                let p = entry(r, *pc).expect("pivot entry");
                let a = entry(r, f).expect("free entry");
                v.push((*pc, -(a * &l) / p));
            }
            v.sort_by_key(|e| e.0);
            make_primitive(&mut v);
            if v.iter().find(|e| e.0 == f).is_some_and(|e| e.1.is_negative()) {
                for e in v.iter_mut() {
                    e.1 = -std::mem::take(&mut e.1);
                }
            }
            out.push((f, v));
        }
        out
    }
}

pub fn row_reduce(m: &SparseMatrix) -> Echelon {
    let mut e = Echelon::new(m.ncols);
    let mut order: Vec<usize> = (0..m.rows.len()).collect();
    order.sort_by_key(|&i| m.rows[i].len());
    for i in order {
        e.insert(m.rows[i].clone());
    }
    e
}

pub fn rank_exact(m: &SparseMatrix) -> usize {
    row_reduce(m).rank()
}

/// Null space of `m` as primitive integer vectors (see [`Echelon::kernel_basis`]).
pub fn kernel(m: &SparseMatrix) -> Vec<SparseRow> {
    row_reduce(m).kernel_basis().into_iter().map(|(_, v)| v).collect()
}

/// Rank by Bareiss fraction-free elimination on a dense matrix.
pub fn rank_bareiss(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

fn mod_p(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.try_into().expect("residue fits in u64")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for `n < 3.3·10^24`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Distinct random primes in `[2^30, 2^31)`.
pub fn random_primes<R: Rng>(count: usize, rng: &mut R) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c = rng.gen_range(1u64 << 30..1u64 << 31) | 1;
        if is_prime(c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Rank over `GF(p)`; never exceeds the rank over `ℚ`.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let inv = |a: u64| pow_mod(a, p - 2, p);
    for r in &m.rows {
        let mut row: Vec<(usize, u64)> =
            r.iter().map(|(c, v)| (*c, mod_p(v, p))).filter(|e| e.1 != 0).collect();
        loop {
            let Some(&(c, v)) = row.first() else { break };
            match pivots.get(&c) {
                None => {
                    let s = inv(v);
                    for e in row.iter_mut() {
                        e.1 = (e.1 as u128 * s as u128 % p as u128) as u64;
                    }
                    pivots.insert(c, row);
                    break;
                }
                Some(prow) => {
                    // prow is monic at c; row -= v·prow
                    let mut out = Vec::with_capacity(row.len() + prow.len());
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < prow.len() {
                        if j == prow.len() || (i < row.len() && row[i].0 < prow[j].0) {
                            out.push(row[i]);
                            i += 1;
                        } else if i == row.len() || prow[j].0 < row[i].0 {
                            let t = (p - (v as u128 * prow[j].1 as u128 % p as u128) as u64) % p;
                            out.push((prow[j].0, t));
                            j += 1;
                        } else {
                            let t = (row[i].1 + p - (v as u128 * prow[j].1 as u128 % p as u128) as u64) % p;
                            if t != 0 {
                                out.push((row[i].0, t));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    row = out;
                }
            }
        }
    }
    pivots.len()
}

/// How a rank was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSource {
    /// Three random primes agreed.
    Modular,
    /// Exact elimination, after the primes disagreed.
    ExactFallback,
}

/// Rank from three random 31-bit primes when they agree, otherwise exact.
pub fn rank_multimodular<R: Rng>(m: &SparseMatrix, rng: &mut R) -> (usize, RankSource) {
    let ranks: Vec<usize> = random_primes(3, rng).into_iter().map(|p| rank_mod_p(m, p)).collect();
    if ranks.iter().all(|&r| r == ranks[0]) {
        (ranks[0], RankSource::Modular)
    } else {
        (rank_exact(m), RankSource::ExactFallback)
    }
}

/// Clears denominators row by row and returns an integer matrix of equal rank.
pub fn integer_rows(rows: &[Vec<BigRational>]) -> SparseMatrix {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = SparseMatrix::new(ncols);
    for r in rows {
        let l = r.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        m.push_row(r.iter().enumerate().map(|(c, q)| (c, q.numer() * (&l / q.denom()))));
    }
    m
}

pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    rank_exact(&integer_rows(rows))
}

/// Product of dense rational matrices.
pub fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&t| !row[t].is_zero())
                        .fold(BigRational::zero(), |acc, t| acc + &row[t] * &b[t][j])
                })
                .collect()
        })
        .collect()
}
