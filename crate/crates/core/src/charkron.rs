//! Kronecker coefficients from symmetric-group characters.
//!
//! `g(λ^(1),…,λ^(d)) = (1/m!) Σ_μ |C_μ| Π_i χ^{λ^(i)}(μ)`, with characters
//! from the Murnaghan–Nakayama rule. Two routes are provided: a memoized
//! point evaluator ([`CharacterTable`]) summed class by class, and a batched
//! class-sum engine ([`kronecker_characters`]) that walks all cycle types at
//! once while adding rim hooks on a bounded abacus.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::JsonlStore;
use crate::error::{Error, Result};
use crate::partition::{Partition, PartitionTuple};

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `z_μ = Π_i i^{m_i} m_i!`, the order of the centralizer of a permutation of cycle type `μ`.
pub fn centralizer_order(mu: &Partition) -> BigUint {
    let mut z = BigUint::one();
    let parts = mu.parts();
    let mut i = 0;
    while i < parts.len() {
        let p = parts[i];
        let mut mult = 0u32;
        while i < parts.len() && parts[i] == p {
            mult += 1;
            i += 1;
            z *= p * mult;
        }
    }
    z
}

/// Sign of any permutation with cycle type `μ`.
pub fn cycle_type_sign(mu: &Partition) -> i32 {
    if (mu.size() as usize - mu.len()) % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub cycle_type: Partition,
    pub size: BigUint,
}

/// One class per partition of `m`, with size `m!/z_μ`.
pub fn conjugacy_classes(m: u32) -> Vec<ConjugacyClass> {
    let mf = factorial(m);
    Partition::all(m, m, m as usize)
        .into_iter()
        .map(|mu| {
            let size = &mf / centralizer_order(&mu);
            ConjugacyClass { cycle_type: mu, size }
        })
        .collect()
}

/// All ways to remove a rim hook of length `r` from `lambda`, with the
/// Murnaghan–Nakayama sign `(-1)^{height}`.
pub fn remove_rim_hooks(lambda: &Partition, r: u32) -> Vec<(Partition, i32)> {
    let len = lambda.len() as u32;
    let beta: Vec<u32> = lambda.parts().iter().enumerate().map(|(i, &p)| p + len - 1 - i as u32).collect();
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb = beta.clone();
        nb[idx] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let parts = nb.iter().enumerate().map(|(i, &x)| x - (len - 1 - i as u32)).collect();
        let shape = Partition::new(parts).expect("bead moves yield partitions");
        out.push((shape, if between % 2 == 0 { 1 } else { -1 }));
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub m: u32,
    pub lambda: Partition,
    pub mu: Partition,
    pub value: String,
}

fn character_key(r: &CharacterRecord) -> String {
    format!("{}|{}", r.lambda, r.mu)
}

/// Memoized Murnaghan–Nakayama evaluator, optionally backed by the on-disk
/// `characters.jsonl` store.
pub struct CharacterTable {
    memo: HashMap<(Partition, Vec<u32>), BigInt>,
    disk: JsonlStore<CharacterRecord>,
}

impl Default for CharacterTable {
    fn default() -> Self {
        Self::new()
    }
}

impl CharacterTable {
    pub fn new() -> Self {
        CharacterTable { memo: HashMap::new(), disk: JsonlStore::memory(character_key) }
    }

    pub fn with_cache_dir(dir: Option<&Path>) -> Self {
        CharacterTable { memo: HashMap::new(), disk: JsonlStore::open(dir, "characters.jsonl", character_key) }
    }

    pub fn disk_stats(&self) -> crate::cache::CacheStats {
        self.disk.stats()
    }

    /// `χ^λ(μ)`.
    pub fn character(&mut self, lambda: &Partition, mu: &Partition) -> Result<BigInt> {
        if lambda.size() != mu.size() {
            return Err(Error::SizeMismatch(format!("|{lambda}| != |{mu}|")));
        }
        let key = format!("{lambda}|{mu}");
        if let Some(rec) = self.disk.get(&key) {
            if let Ok(v) = rec.value.parse::<BigInt>() {
                return Ok(v);
            }
        }
        let v = self.eval(lambda, mu.parts());
        self.disk.put(CharacterRecord { m: mu.size(), lambda: lambda.clone(), mu: mu.clone(), value: v.to_string() });
        Ok(v)
    }

    fn eval(&mut self, lambda: &Partition, mu: &[u32]) -> BigInt {
        if mu.is_empty() {
            return if lambda.is_empty() { BigInt::one() } else { BigInt::zero() };
        }
        let key = (lambda.clone(), mu.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        for (shape, sign) in remove_rim_hooks(lambda, mu[0]) {
            let v = self.eval(&shape, &mu[1..]);
            if sign > 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// `χ^λ(μ)` with a fresh memo table.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    CharacterTable::new().character(lambda, mu)
}

fn finish_class_sum(total: BigInt, m: u32) -> Result<BigUint> {
    let mf = BigInt::from(factorial(m));
    let (q, r) = total.div_rem(&mf);
    if !r.is_zero() {
        return Err(Error::Internal(format!("class sum {total} not divisible by {m}!")));
    }
    if q.is_negative() {
        return Err(Error::Internal(format!("negative Kronecker coefficient {q}")));
    }
    Ok(q.to_biguint().expect("nonnegative"))
}

/// Class-by-class sum with the memoized evaluator. Reference route; practical
/// for `m` up to the low twenties.
pub fn kronecker_characters_naive(t: &PartitionTuple, table: &mut CharacterTable) -> Result<BigUint> {
    let m = t.common_size()?;
    let mut total = BigInt::zero();
    for class in conjugacy_classes(m) {
        let mut prod = BigInt::from(class.size);
        for lambda in t.entries() {
            prod *= table.character(lambda, &class.cycle_type)?;
            if prod.is_zero() {
                break;
            }
        }
        total += prod;
    }
    finish_class_sum(total, m)
}

/// Kronecker coefficient `g(𝝀)` via the batched class-sum engine.
pub fn kronecker_characters(t: &PartitionTuple) -> Result<BigUint> {
    ClassSumEngine::new(t)?.run(&ClassSumOptions::default())
}

#[derive(Debug, Clone, Default)]
pub struct ClassSumOptions {
    /// JSON-lines file of finished task partial sums; an interrupted run resumes from it.
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TaskRecord {
    tuple: String,
    task: usize,
    partial: String,
}

fn task_key(r: &TaskRecord) -> String {
    format!("{}#{}", r.tuple, r.task)
}

/// Shapes are stored as their first `rows` parts; every shape in the lattice is
/// contained in at least one target.
struct Lattice {
    shapes: Vec<Vec<u8>>,
    local: Vec<u32>,
    by_size: Vec<Vec<u32>>,
    /// bit i set when the shape is contained in target i
    mask: Vec<u32>,
    /// `hooks[p]` is CSR over shape ids: rim hooks of length p that can be added
    hooks: Vec<(Vec<u32>, Vec<(u32, i8)>)>,
}

impl Lattice {
    fn build(targets: &[Vec<u8>], rows: usize, m: u32) -> Lattice {
        let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
        let mut shapes: Vec<Vec<u8>> = Vec::new();
        let mut mask: Vec<u32> = Vec::new();
        for (ti, t) in targets.iter().enumerate() {
            let mut cur = vec![0u8; rows];
            sub_shapes(t, 0, u8::MAX, &mut cur, &mut |s| {
                let id = *index.entry(s.to_vec()).or_insert_with(|| {
                    shapes.push(s.to_vec());
                    mask.push(0);
                    (shapes.len() - 1) as u32
                });
                mask[id as usize] |= 1 << ti;
            });
        }
        let size_of: Vec<u32> = shapes.iter().map(|s| s.iter().map(|&x| x as u32).sum()).collect();
        let mut by_size = vec![Vec::new(); m as usize + 1];
        let mut local = vec![0u32; shapes.len()];
        for (id, &s) in size_of.iter().enumerate() {
            local[id] = by_size[s as usize].len() as u32;
            by_size[s as usize].push(id as u32);
        }
        let mut hooks = Vec::with_capacity(m as usize + 1);
        hooks.push((vec![0; shapes.len() + 1], Vec::new()));
        for p in 1..=m {
            let mut offsets = Vec::with_capacity(shapes.len() + 1);
            let mut data = Vec::new();
            offsets.push(0u32);
            for shape in &shapes {
                for (next, sign) in add_rim_hooks(shape, p) {
                    if let Some(&id) = index.get(&next) {
                        data.push((local[id as usize], sign));
                    }
                }
                offsets.push(data.len() as u32);
            }
            hooks.push((offsets, data));
        }
        Lattice { shapes, local, by_size, mask, hooks }
    }
}

fn sub_shapes(target: &[u8], row: usize, cap: u8, cur: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
    if row == cur.len() {
        f(cur);
        return;
    }
    let hi = target[row].min(cap);
    for v in 0..=hi {
        cur[row] = v;
        sub_shapes(target, row + 1, v, cur, f);
    }
    cur[row] = 0;
}

/// Add a rim hook of length `p` on an abacus with `shape.len()` beads.
fn add_rim_hooks(shape: &[u8], p: u32) -> Vec<(Vec<u8>, i8)> {
    let r = shape.len();
    let beta: Vec<u32> = shape.iter().enumerate().map(|(i, &x)| x as u32 + (r - 1 - i) as u32).collect();
    let mut out = Vec::new();
    for idx in 0..r {
        let b = beta[idx];
        let t = b + p;
        if beta.contains(&t) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b && x < t).count();
        let mut nb = beta.clone();
        nb[idx] = t;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> = nb.iter().enumerate().map(|(i, &x)| x - (r - 1 - i) as u32).collect();
        if parts.iter().any(|&x| x > u8::MAX as u32) {
            continue;
        }
        out.push((parts.iter().map(|&x| x as u8).collect(), if between % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// A DFS node: the multiset of cycle lengths chosen so far, in non-decreasing order,
/// together with the signed rim-hook tableau counts for every lattice shape of size `sum`.
#[derive(Clone)]
struct Node {
    sum: u32,
    last: u32,
    last_mult: u32,
    len: u32,
    /// `m!/z` of the prefix
    class_factor: BigUint,
    values: Vec<i128>,
}

struct Overflow;

/// Batched evaluation of `Σ_μ |C_μ| Π_i χ^{λ^(i)}(μ)`.
pub struct ClassSumEngine {
    tuple: PartitionTuple,
    m: u32,
    lattice: Lattice,
    targets_local: Vec<u32>,
    full_mask: u32,
    /// true when working with conjugate shapes, which twists each term by `sgn(μ)^d`
    sign_twist: bool,
}

impl ClassSumEngine {
    pub fn new(t: &PartitionTuple) -> Result<Self> {
        let m = t.common_size()?;
        if t.d() > 32 {
            return Err(Error::OutOfRange("at most 32 tuple entries".into()));
        }
        let rows_direct = t.entries().iter().map(Partition::len).max().unwrap_or(0);
        let rows_conj = t.max_part() as usize;
        let conj = rows_conj < rows_direct;
        let shapes: Vec<Partition> =
            if conj { t.entries().iter().map(Partition::conjugate).collect() } else { t.entries().to_vec() };
        let rows = rows_direct.min(rows_conj).max(1);
        if shapes.iter().any(|s| s.first() > u8::MAX as u32) {
            return Err(Error::OutOfRange("parts above 255".into()));
        }
        let targets: Vec<Vec<u8>> =
            shapes.iter().map(|s| (0..rows).map(|i| s.part(i) as u8).collect()).collect();
        let lattice = Lattice::build(&targets, rows, m);
        let index: HashMap<&[u8], usize> =
            lattice.shapes.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let targets_local = targets.iter().map(|t| lattice.local[index[t.as_slice()]]).collect();
        let sign_twist = conj && t.d() % 2 == 1;
        Ok(ClassSumEngine { tuple: t.clone(), m, lattice, targets_local, full_mask: (1u32 << t.d()) - 1, sign_twist })
    }

    pub fn run(&self, opts: &ClassSumOptions) -> Result<BigUint> {
        let root = Node {
            sum: 0,
            last: 1,
            last_mult: 0,
            len: 0,
            class_factor: factorial(self.m),
            values: vec![1],
        };
        let tasks = self.split(root);
        let checkpoint = opts.checkpoint.as_ref().map(|p| {
            let dir = p.parent().unwrap_or(Path::new("."));
            let file = p.file_name().and_then(|f| f.to_str()).unwrap_or("checkpoint.jsonl");
            JsonlStore::open(Some(dir), file, task_key)
        });
        let tuple_key = self.tuple.to_string();
        let done = AtomicUsize::new(0);
        let total_tasks = tasks.len();
        let partials: Vec<std::result::Result<BigInt, Overflow>> = tasks
            .into_par_iter()
            .enumerate()
            .map(|(i, node)| {
                if let Some(cp) = &checkpoint {
                    if let Some(rec) = cp.get(&format!("{tuple_key}#{i}")) {
                        if let Ok(v) = rec.partial.parse::<BigInt>() {
                            return Ok(v);
                        }
                    }
                }
                let mut acc = BigInt::zero();
                self.dfs(&node, &mut acc)?;
                if let Some(cp) = &checkpoint {
                    cp.put(TaskRecord { tuple: tuple_key.clone(), task: i, partial: acc.to_string() });
                }
                let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                if n % 64 == 0 || n == total_tasks {
                    log::debug!("class sum {tuple_key}: {n}/{total_tasks} branches");
                }
                Ok(acc)
            })
            .collect();
        let mut total = BigInt::zero();
        for p in partials {
            match p {
                Ok(v) => total += v,
                Err(Overflow) => {
                    return Err(Error::Budget(format!(
                        "character values of {} exceed 128-bit intermediates",
                        self.tuple
                    )))
                }
            }
        }
        finish_class_sum(total, self.m)
    }

    fn children(&self, node: &Node) -> impl Iterator<Item = u32> + '_ {
        let m = self.m;
        let s = node.sum;
        (node.last..=m - s).filter(move |&p| s + p == m || s + 2 * p <= m)
    }

    fn step(&self, node: &Node, p: u32) -> std::result::Result<Option<Node>, Overflow> {
        let next_sum = node.sum + p;
        let width = self.lattice.by_size[next_sum as usize].len();
        if width == 0 {
            return Ok(None);
        }
        let mut values = vec![0i128; width];
        let (offsets, data) = &self.lattice.hooks[p as usize];
        let group = &self.lattice.by_size[node.sum as usize];
        for (li, &v) in node.values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let id = group[li] as usize;
            for &(to, sign) in &data[offsets[id] as usize..offsets[id + 1] as usize] {
                let slot = &mut values[to as usize];
                *slot = if sign > 0 { slot.checked_add(v) } else { slot.checked_sub(v) }.ok_or(Overflow)?;
            }
        }
        let next_group = &self.lattice.by_size[next_sum as usize];
        let reach = values
            .iter()
            .zip(next_group)
            .filter(|(v, _)| **v != 0)
            .fold(0u32, |acc, (_, &id)| acc | self.lattice.mask[id as usize]);
        if reach != self.full_mask {
            return Ok(None);
        }
        let mult = if p == node.last { node.last_mult + 1 } else { 1 };
        let class_factor = &node.class_factor / (p * mult);
        Ok(Some(Node { sum: next_sum, last: p, last_mult: mult, len: node.len + 1, class_factor, values }))
    }

    fn leaf(&self, node: &Node, acc: &mut BigInt) {
        let mut prod = BigInt::from(node.class_factor.clone());
        for &t in &self.targets_local {
            let v = node.values[t as usize];
            if v == 0 {
                return;
            }
            prod *= v;
        }
        if self.sign_twist && (self.m - node.len) % 2 == 1 {
            prod = -prod;
        }
        *acc += prod;
    }

    fn dfs(&self, node: &Node, acc: &mut BigInt) -> std::result::Result<(), Overflow> {
        if node.sum == self.m {
            self.leaf(node, acc);
            return Ok(());
        }
        for p in self.children(node) {
            if let Some(child) = self.step(node, p)? {
                self.dfs(&child, acc)?;
            }
        }
        Ok(())
    }

    /// Expands the shallow levels breadth-first into independent tasks.
    fn split(&self, root: Node) -> Vec<Node> {
        const WANT: usize = 2048;
        let mut frontier = vec![root];
        for _ in 0..4 {
            if frontier.len() >= WANT {
                break;
            }
            let mut next = Vec::new();
            for node in frontier {
                if node.sum == self.m {
                    next.push(node);
                    continue;
                }
                let children: std::result::Result<Vec<_>, Overflow> =
                    self.children(&node).map(|p| self.step(&node, p)).collect();
                match children {
                    Ok(children) => next.extend(children.into_iter().flatten()),
                    // left whole so that the overflow is reported when the task runs
                    Err(Overflow) => next.push(node),
                }
            }
            frontier = next;
        }
        frontier
    }

    pub fn lattice_size(&self) -> usize {
        self.lattice.shapes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn tuple(s: &str) -> PartitionTuple {
        s.parse().unwrap()
    }

    #[test]
    fn classes_of_s3() {
        let c = conjugacy_classes(3);
        let sizes: Vec<(String, u32)> =
            c.iter().map(|c| (c.cycle_type.to_string(), c.size.to_string().parse().unwrap())).collect();
        assert_eq!(sizes.len(), 3);
        assert!(sizes.contains(&("1,1,1".into(), 1)));
        assert!(sizes.contains(&("2,1".into(), 3)));
        assert!(sizes.contains(&("3".into(), 2)));
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for m in 0..=12 {
            let total: BigUint = conjugacy_classes(m).iter().map(|c| c.size.clone()).sum();
            assert_eq!(total, factorial(m), "m = {m}");
        }
    }

    // Permutation characters of Young subgroups: on the cosets of S_{m−1}, fix − 1
    // is χ^{(m−1,1)}; on 2-subsets, C(fix,2) + #2-cycles − fix is χ^{(m−2,2)}.
    #[test]
    fn characters_match_permutation_modules() {
        for m in 4..=9u32 {
            for mu in Partition::all(m, m, m as usize) {
                let fix = mu.count_parts_equal(1) as i64;
                let twos = mu.count_parts_equal(2) as i64;
                let std = mn_character(&Partition::new(vec![m - 1, 1]).unwrap(), &mu).unwrap();
                assert_eq!(std, BigInt::from(fix - 1));
                let two = mn_character(&Partition::new(vec![m - 2, 2]).unwrap(), &mu).unwrap();
                assert_eq!(two, BigInt::from(fix * (fix - 1) / 2 + twos - fix));
                let sign = mn_character(&Partition::new(vec![1; m as usize]).unwrap(), &mu).unwrap();
                assert_eq!(sign, BigInt::from(cycle_type_sign(&mu)));
                assert_eq!(mn_character(&Partition::new(vec![m]).unwrap(), &mu).unwrap(), BigInt::one());
            }
        }
        assert_eq!(mn_character(&p("2,1"), &p("3")).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn column_orthogonality() {
        for m in 1..=8 {
            let mut table = CharacterTable::new();
            for mu in Partition::all(m, m, m as usize) {
                let s: BigInt = Partition::all(m, m, m as usize)
                    .iter()
                    .map(|l| table.character(l, &mu).unwrap().pow(2))
                    .sum();
                assert_eq!(s, BigInt::from(centralizer_order(&mu)));
            }
        }
    }

    #[test]
    fn trivial_and_sign_entries() {
        for m in 1..=7 {
            let all = Partition::all(m, m, m as usize);
            for a in &all {
                for b in &all {
                    let triv = PartitionTuple::new(vec![a.clone(), b.clone(), Partition::new(vec![m]).unwrap()]).unwrap();
                    let sign = PartitionTuple::new(vec![a.clone(), b.clone(), Partition::new(vec![1; m as usize]).unwrap()]).unwrap();
                    assert_eq!(kronecker_characters(&triv).unwrap(), BigUint::from((a == b) as u32));
                    assert_eq!(kronecker_characters(&sign).unwrap(), BigUint::from((*a == b.conjugate()) as u32));
                }
            }
        }
    }

    #[test]
    fn engine_matches_naive_route() {
        let mut table = CharacterTable::new();
        for m in 0..=6 {
            for t in PartitionTuple::all(3, m, 4, 6) {
                assert_eq!(kronecker_characters(&t).unwrap(), kronecker_characters_naive(&t, &mut table).unwrap(), "{t}");
            }
        }
        for s in ["2,1;2,1;2,1;2,1", "3,1;2,2;2,1,1;3,1", "2,2;2,2;2,2;2,2;2,2"] {
            let t = tuple(s);
            assert_eq!(kronecker_characters(&t).unwrap(), kronecker_characters_naive(&t, &mut table).unwrap(), "{t}");
        }
    }

    #[test]
    fn standard_square_decomposition() {
        // χ^{(m−1,1)} ⊗ χ^{(m−1,1)} = χ^{(m)} + χ^{(m−1,1)} + χ^{(m−2,2)} + χ^{(m−2,1,1)} for m ≥ 4
        for m in 4..=9u32 {
            let std = Partition::new(vec![m - 1, 1]).unwrap();
            for nu in Partition::all(m, m, m as usize) {
                let expected = [vec![m], vec![m - 1, 1], vec![m - 2, 2], vec![m - 2, 1, 1]]
                    .iter()
                    .any(|v| Partition::new(v.clone()).unwrap() == nu);
                let t = PartitionTuple::new(vec![std.clone(), std.clone(), nu.clone()]).unwrap();
                assert_eq!(kronecker_characters(&t).unwrap(), BigUint::from(expected as u32), "{t}");
            }
        }
    }

    #[test]
    fn invariant_under_entry_permutation_and_double_conjugation() {
        let t = tuple("4,2;2,2,2;3,2,1");
        let g = kronecker_characters(&t).unwrap();
        for order in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            assert_eq!(kronecker_characters(&t.permuted(&order)).unwrap(), g);
        }
        let mut two = t.entries().to_vec();
        two[0] = two[0].conjugate();
        two[1] = two[1].conjugate();
        assert_eq!(kronecker_characters(&PartitionTuple::new(two).unwrap()).unwrap(), g);
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        assert!(kronecker_characters(&tuple("2;1;1")).is_err());
    }

    #[test]
    fn checkpointed_run_resumes_to_same_value() {
        let dir = tempfile::tempdir().unwrap();
        let t = tuple("3,2,1;3,2,1;4,1,1");
        let engine = ClassSumEngine::new(&t).unwrap();
        let opts = ClassSumOptions { checkpoint: Some(dir.path().join("ck.jsonl")) };
        let first = engine.run(&opts).unwrap();
        let again = engine.run(&opts).unwrap();
        assert_eq!(first, again);
        assert_eq!(first, kronecker_characters(&t).unwrap());
    }
}
