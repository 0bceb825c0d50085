//! Lefschetz maps `v ↦ ω ∧ v` between highest weight spaces, the LP and HLP
//! verdicts, the `sl(2)` triple for `k = 2`, and stable injectivity.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::cayley::{build_cayley, embed};
use crate::charkron::kronecker_characters;
use crate::cube::{enumerate_magic_sets, CubeSet, Dims};
use crate::error::{Error, Result};
use crate::exterior::{Contraction, Multivector};
use crate::hwv::{hwv_basis, is_highest_weight, HwvBasis};
use crate::linalg::{mat_mul, rank_exact, rank_rational, SparseMatrix};
use crate::partition::PartitionTuple;
use crate::seqlab::{k_complementary, sequence_range};

/// `L` restricted to a pair of highest weight spaces, in their bases.
#[derive(Debug, Clone)]
pub struct LefschetzMap {
    pub source: HwvBasis,
    pub target: HwvBasis,
    /// `target.dim() × source.dim()`; column `j` holds the coordinates of `ω ∧ v_j`.
    pub matrix: Vec<Vec<BigRational>>,
    pub rank: usize,
}

impl LefschetzMap {
    pub fn injective(&self) -> bool {
        self.rank == self.source.dim()
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target.dim()
    }
}

/// Matrix of `v ↦ ω ∧ v` from `source` to `target`; fails when an image
/// leaves the span of the target basis.
pub fn map_between(source: &HwvBasis, target: &HwvBasis, omega: &Multivector) -> Result<LefschetzMap> {
    let mut matrix = vec![vec![BigRational::zero(); source.dim()]; target.dim()];
    for (j, v) in source.multivectors().iter().enumerate() {
        let img = omega.wedge(v)?;
        if img.is_zero() {
            continue;
        }
        let coords = target.coordinates(&img)?.ok_or_else(|| {
            Error::Internal(format!("ω ∧ v lies outside HWV of {} (source {})", target.tuple, source.tuple))
        })?;
        for (i, c) in coords.into_iter().enumerate() {
            matrix[i][j] = c;
        }
    }
    let rank = rank_rational(&matrix);
    Ok(LefschetzMap { source: source.clone(), target: target.clone(), matrix, rank })
}

/// Highest weight space of `𝝀'`, or an empty one when `𝝀` does not fit in
/// the `k^{d−1} × k` box (then `g(𝝀) = 0`).
fn space(t: &PartitionTuple, dims: Dims, budget: usize) -> Result<Option<HwvBasis>> {
    if t.max_len() > dims.slice_size() || t.max_part() as usize > dims.k {
        return Ok(None);
    }
    hwv_basis(t, dims, budget).map(Some)
}

/// `L : HWV_{𝝀'} → HWV_{(ρ_k 𝝀)'}`.
pub fn lefschetz_matrix(t: &PartitionTuple, dims: Dims, budget: usize) -> Result<LefschetzMap> {
    let omega = build_cayley(dims.d, dims.k)?.body;
    let source = hwv_basis(t, dims, budget)?;
    let next = t.rho(dims.k as u32, 1)?;
    match space(&next, dims, budget)? {
        Some(target) => map_between(&source, &target, &omega),
        None => {
            let empty = HwvBasis { tuple: next, ambient: source.ambient.clone(), vectors: Vec::new() };
            Ok(LefschetzMap { matrix: Vec::new(), rank: 0, target: empty, source })
        }
    }
}

/// Highest weight spaces `U_n` for `n` in the sequence range and the maps between them.
pub struct LefschetzChain {
    pub tuple: PartitionTuple,
    pub dims: Dims,
    pub range: (i64, i64),
    pub spaces: Vec<HwvBasis>,
    pub maps: Vec<LefschetzMap>,
}

pub fn lefschetz_chain(t: &PartitionTuple, dims: Dims, budget: usize) -> Result<LefschetzChain> {
    let (lo, hi) = sequence_range(t, dims.k as u32, dims.d)?;
    let omega = build_cayley(dims.d, dims.k)?.body;
    let mut spaces = Vec::new();
    for n in lo..=hi {
        let tn = t.rho(dims.k as u32, n)?;
        spaces.push(hwv_basis(&tn, dims, budget)?);
    }
    let maps = spaces.windows(2).map(|w| map_between(&w[0], &w[1], &omega)).collect::<Result<Vec<_>>>()?;
    Ok(LefschetzChain { tuple: t.clone(), dims, range: (lo, hi), spaces, maps })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpVerdict {
    pub lambda: String,
    pub d: usize,
    pub k: usize,
    pub range: (i64, i64),
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub pivot: Option<i64>,
    pub holds: bool,
}

/// Smallest `n_0` such that every map with source index `≥ n_0` is
/// surjective, and whether every earlier map is injective. `dims[i]` is the
/// dimension at index `start + i` and `ranks[i]` the rank of the map out of it.
pub fn lp_pivot(start: i64, dims: &[usize], ranks: &[usize]) -> (i64, bool) {
    let mut first = ranks.len();
    while first > 0 && ranks[first - 1] == dims[first] {
        first -= 1;
    }
    let holds = (0..first).all(|i| ranks[i] == dims[i]);
    (start + first as i64, holds)
}

pub fn check_lp(t: &PartitionTuple, dims: Dims, budget: usize) -> Result<LpVerdict> {
    let chain = lefschetz_chain(t, dims, budget)?;
    let dim_seq: Vec<usize> = chain.spaces.iter().map(HwvBasis::dim).collect();
    let ranks: Vec<usize> = chain.maps.iter().map(|m| m.rank).collect();
    let (pivot, holds) = lp_pivot(chain.range.0, &dim_seq, &ranks);
    Ok(LpVerdict {
        lambda: t.to_string(),
        d: dims.d,
        k: dims.k,
        range: chain.range,
        dims: dim_seq,
        ranks,
        pivot: holds.then_some(pivot),
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HlpPair {
    pub n: i64,
    pub n_star: i64,
    pub dim: usize,
    pub dim_star: usize,
    pub rank: usize,
    pub isomorphism: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HlpVerdict {
    pub lambda: String,
    pub d: usize,
    pub k: usize,
    pub range: (i64, i64),
    pub dims: Vec<usize>,
    pub pairs: Vec<HlpPair>,
    pub holds: bool,
}

/// For each pair `(n, n*)` symmetric about the middle of the range, checks
/// that the dimensions agree and `L^{n*−n}` is an isomorphism. `L^j` is
/// composed from single-step matrices.
pub fn check_hlp(t: &PartitionTuple, dims: Dims, budget: usize) -> Result<HlpVerdict> {
    if !k_complementary(t, dims.k as u32, dims.d)? {
        return Err(Error::OutOfRange(format!("{t} is not {}-complementary", dims.k)));
    }
    let chain = lefschetz_chain(t, dims, budget)?;
    let (lo, hi) = chain.range;
    let dim_seq: Vec<usize> = chain.spaces.iter().map(HwvBasis::dim).collect();
    let mut pairs = Vec::new();
    let len = dim_seq.len();
    for i in 0..len / 2 {
        let j = len - 1 - i;
        let mut power = identity(dim_seq[i]);
        for m in &chain.maps[i..j] {
            power = mat_mul(&m.matrix, &power);
        }
        let rank = rank_rational(&power);
        pairs.push(HlpPair {
            n: lo + i as i64,
            n_star: lo + j as i64,
            dim: dim_seq[i],
            dim_star: dim_seq[j],
            rank,
            isomorphism: dim_seq[i] == dim_seq[j] && rank == dim_seq[i],
        });
    }
    let holds = pairs.iter().all(|p| p.isomorphism);
    Ok(HlpVerdict { lambda: t.to_string(), d: dims.d, k: dims.k, range: (lo, hi), dims: dim_seq, pairs, holds })
}

fn identity(n: usize) -> Vec<Vec<BigRational>> {
    (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i32))).collect()).collect()
}

/// `ω^j ∧ v` directly, for comparison with composed single-step matrices.
pub fn iterate_direct(omega: &Multivector, v: &Multivector, j: usize) -> Result<Multivector> {
    omega.power(j).wedge(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRank {
    pub degree: usize,
    pub source_dim: String,
    pub target_dim: String,
    pub rank: usize,
    pub full: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LpFullEvidence {
    Ranks { ranks: Vec<DegreeRank> },
    /// A nonzero `v` of degree `degree` with `ω ∧ v = 0` although
    /// `dim ⋀^degree V ≤ dim ⋀^{degree+k} V`, so `L` cannot have full rank.
    Witness { witness: String, degree: usize, source_dim: String, target_dim: String, image_zero: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpFullVerdict {
    pub d: usize,
    pub k: usize,
    pub holds: bool,
    pub evidence: LpFullEvidence,
}

fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(r))
}

/// All `n`-subsets of the cube as bit masks, in lexicographic order.
fn subsets_of_size(dims: Dims, n: usize) -> Vec<CubeSet> {
    let total = dims.cells();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(start: usize, total: usize, n: usize, cur: &mut Vec<usize>, dims: Dims, out: &mut Vec<CubeSet>) {
        if cur.len() == n {
            out.push(CubeSet::from_ranks(dims, cur).expect("in range"));
            return;
        }
        for r in start..=total - (n - cur.len()) {
            cur.push(r);
            go(r + 1, total, n, cur, dims, out);
            cur.pop();
        }
    }
    go(0, total, n, &mut cur, dims, &mut out);
    out
}

/// LP_{d,k}: `L : ⋀^n V → ⋀^{n+k} V` has full rank for every `n`. Ranks are
/// computed exactly when every graded piece has at most `budget` basis
/// vectors; otherwise a kernel witness (`ω` when `ω² = 0`, or the slice
/// vector) is sought below the middle degree.
pub fn check_lp_full(d: usize, k: usize, budget: usize) -> Result<LpFullVerdict> {
    let dims = Dims::new(d, k)?;
    let total = dims.cells();
    let omega = build_cayley(d, k)?.body;
    let largest = binomial(total, total / 2);
    if largest <= BigUint::from(budget) {
        let mut ranks = Vec::new();
        for n in 0..=total.saturating_sub(k) {
            let src = subsets_of_size(dims, n);
            let tgt = subsets_of_size(dims, n + k);
            let index: std::collections::HashMap<CubeSet, usize> = tgt.iter().enumerate().map(|(i, x)| (*x, i)).collect();
            let mut m = SparseMatrix::new(tgt.len());
            for x in &src {
                let img = omega.wedge(&Multivector::basis(*x))?;
                m.push_row(img.terms().iter().map(|(y, c)| (index[y], c.clone())));
            }
            let rank = rank_exact(&m);
            ranks.push(DegreeRank {
                degree: n,
                source_dim: src.len().to_string(),
                target_dim: tgt.len().to_string(),
                rank,
                full: rank == src.len().min(tgt.len()),
            });
        }
        let holds = ranks.iter().all(|r| r.full);
        return Ok(LpFullVerdict { d, k, holds, evidence: LpFullEvidence::Ranks { ranks } });
    }
    let slice = Multivector::basis(CubeSet::from_mask(dims, dims.slice_mask(0, 1))?);
    for (name, v) in [("omega", omega.clone()), ("slice_vector", slice)] {
        let degree = v.grade().unwrap_or(0);
        if v.is_zero() || binomial(total, degree) > binomial(total, degree + k) {
            continue;
        }
        let image = omega.wedge(&v)?;
        if image.is_zero() {
            return Ok(LpFullVerdict {
                d,
                k,
                holds: false,
                evidence: LpFullEvidence::Witness {
                    witness: name.into(),
                    degree,
                    source_dim: binomial(total, degree).to_string(),
                    target_dim: binomial(total, degree + k).to_string(),
                    image_zero: true,
                },
            });
        }
    }
    Err(Error::Budget(format!("⋀V for [{k}]^{d} exceeds {budget} basis vectors per degree and no witness applies")))
}

/// `H` on `⋀(ℂ²)^{⊗d}`: multiplication by `ℓ − 2^{d−1}` on grade `ℓ`.
pub fn apply_h(v: &Multivector) -> Multivector {
    let half = (v.dims().cells() / 2) as i64;
    let mut out = Multivector::zero(v.dims());
    for (x, c) in v.terms() {
        out.add_term(*x, c * BigInt::from(x.len() as i64 - half));
    }
    out
}

/// `[X, Y] v = ω ∧ (ω* ⌟ v) − ω* ⌟ (ω ∧ v)`.
pub fn commutator_xy(omega: &Multivector, v: &Multivector, convention: Contraction) -> Result<Multivector> {
    let xy = omega.wedge(&omega.interior(v, convention)?)?;
    let yx = omega.interior(&omega.wedge(v)?, convention)?;
    Ok(&xy - &yx)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sl2Report {
    pub d: usize,
    pub checked: usize,
    pub failures: Vec<String>,
    pub holds: bool,
}

/// Checks `[X,Y] = H`, `[H,X] = 2X`, `[H,Y] = −2Y` on basis vectors of
/// `⋀(ℂ²)^{⊗d}`: every basis vector when `2^d ≤ 8`, otherwise `samples`
/// random ones plus every `e_T` for magic `T` of magnitude at most
/// `magic_max` or at least `2^{d−1} − magic_max`.
pub fn sl2_check(d: usize, samples: usize, magic_max: u32, seed: u64) -> Result<Sl2Report> {
    let dims = Dims::new(d, 2)?;
    let omega = build_cayley(d, 2)?.body;
    let conv = Contraction::Adjoint;
    let mut vectors: Vec<CubeSet> = Vec::new();
    if dims.cells() <= 8 {
        vectors.extend((0..=dims.full_mask()).map(|b| CubeSet::from_mask(dims, b).expect("in range")));
    } else {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        for _ in 0..samples {
            let bits: u128 = rng.gen::<u128>() & dims.full_mask();
            vectors.push(CubeSet::from_mask(dims, bits)?);
        }
        let top = dims.slice_size() as u32;
        for n in (0..=magic_max.min(top)).chain(top.saturating_sub(magic_max)..=top) {
            vectors.extend(enumerate_magic_sets(dims, n, 1_000_000)?);
        }
        vectors.sort();
        vectors.dedup();
    }
    let mut failures = Vec::new();
    for x in &vectors {
        let v = Multivector::basis(*x);
        let xy = commutator_xy(&omega, &v, conv)?;
        if xy != apply_h(&v) {
            failures.push(format!("[X,Y] at {x}"));
        }
        let xv = omega.wedge(&v)?;
        let hx = &apply_h(&xv) - &omega.wedge(&apply_h(&v))?;
        if hx != xv.scale(&BigInt::from(2)) {
            failures.push(format!("[H,X] at {x}"));
        }
        let yv = omega.interior(&v, conv)?;
        let hy = &apply_h(&yv) - &omega.interior(&apply_h(&v), conv)?;
        if hy != yv.scale(&BigInt::from(-2)) {
            failures.push(format!("[H,Y] at {x}"));
        }
    }
    Ok(Sl2Report { d, checked: vectors.len(), holds: failures.is_empty(), failures })
}

/// `[X,Y] e_T` for `T = {(1,1,1),(2,2,2)}` with the Cayley form of `[4]^3`.
pub fn k4_control(convention: Contraction) -> Result<Multivector> {
    let dims = Dims::new(3, 4)?;
    let omega = build_cayley(3, 4)?.body;
    let t = Multivector::basis(CubeSet::parse_text(dims, "111,222")?);
    commutator_xy(&omega, &t, convention)
}

/// Basis of `P^n = ker(Y) ∩ ⋀^n V` for `k = 2`.
pub fn primitive_basis(d: usize, n: usize) -> Result<Vec<Multivector>> {
    let dims = Dims::new(d, 2)?;
    if n > dims.cells() {
        return Err(Error::OutOfRange(format!("degree {n} exceeds {}", dims.cells())));
    }
    let omega = build_cayley(d, 2)?.body;
    let src = subsets_of_size(dims, n);
    if n < 2 {
        return Ok(src.into_iter().map(Multivector::basis).collect());
    }
    let tgt = subsets_of_size(dims, n - 2);
    let index: std::collections::HashMap<CubeSet, usize> = tgt.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    // rows of Yᵀ are images of source vectors; the kernel of Y is the left
    // kernel, so build Y with rows indexed by target
    let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); tgt.len()];
    for (col, x) in src.iter().enumerate() {
        let img = omega.interior(&Multivector::basis(*x), Contraction::Adjoint)?;
        for (y, c) in img.terms() {
            rows[index[y]].push((col, c.clone()));
        }
    }
    let mut m = SparseMatrix::new(src.len());
    for r in rows {
        m.push_row(r);
    }
    let ker = crate::linalg::kernel(&m);
    Ok(ker
        .into_iter()
        .map(|v| {
            let mut mv = Multivector::zero(dims);
            for (c, x) in v {
                mv.add_term(src[c], x);
            }
            mv
        })
        .collect())
}

/// `dim X^i P^{n−2i}` for `i = 0..=⌊n/2⌋`.
pub fn lefschetz_decomposition_dims(d: usize, n: usize) -> Result<Vec<usize>> {
    let dims = Dims::new(d, 2)?;
    let omega = build_cayley(d, 2)?.body;
    let mut out = Vec::new();
    for i in 0..=n / 2 {
        let prim = primitive_basis(d, n - 2 * i)?;
        let power = omega.power(i);
        let tgt = subsets_of_size(dims, n);
        let index: std::collections::HashMap<CubeSet, usize> = tgt.iter().enumerate().map(|(j, x)| (*x, j)).collect();
        let mut m = SparseMatrix::new(tgt.len());
        for p in &prim {
            let img = power.wedge(p)?;
            m.push_row(img.terms().iter().map(|(y, c)| (index[y], c.clone())));
        }
        out.push(rank_exact(&m));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableInjectivityReport {
    pub lambda: String,
    pub d: usize,
    pub k: usize,
    pub ell: usize,
    pub small_dim: usize,
    pub small_injective: bool,
    /// Embedded vectors are highest weight vectors in `⋀V_ℓ`.
    pub embedded_highest: bool,
    pub large_dim: usize,
    /// Rank of `L_ℓ` on the embedded vectors.
    pub embedded_rank: usize,
    /// Rank of `L_ℓ` on `HWV_{𝝀'} ⋀V_ℓ` computed directly.
    pub large_rank: usize,
    pub g: String,
    pub g_next: String,
    pub holds: bool,
}

/// Embeds `HWV_{𝝀'} ⋀V_k` into `⋀V_ℓ` and checks that `L_ℓ` is injective on
/// it whenever `L_k` is, together with `g(𝝀) ≤ g(ρ_ℓ 𝝀)`.
pub fn stable_injectivity_check(t: &PartitionTuple, k: usize, ell: usize, budget: usize) -> Result<StableInjectivityReport> {
    if ell <= k {
        return Err(Error::OutOfRange(format!("need ℓ > k, got ℓ = {ell}, k = {k}")));
    }
    let d = t.d();
    let small = Dims::new(d, k)?;
    let large = Dims::new(d, ell)?;
    let lk = lefschetz_matrix(t, small, budget)?;
    let omega_l = build_cayley(d, ell)?.body;
    let subsets: Vec<Vec<usize>> = vec![(1..=k).collect(); d];
    let embedded: Vec<Multivector> =
        lk.source.multivectors().iter().map(|v| embed(v, large, &subsets)).collect::<Result<_>>()?;
    let embedded_highest = embedded.iter().all(is_highest_weight);
    let rank_of = |vs: &[Multivector]| -> Result<usize> {
        let mut all: Vec<CubeSet> = Vec::new();
        let images: Vec<Multivector> = vs.iter().map(|v| omega_l.wedge(v)).collect::<Result<_>>()?;
        for img in &images {
            all.extend(img.terms().keys().copied());
        }
        all.sort();
        all.dedup();
        let index: std::collections::HashMap<CubeSet, usize> = all.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let mut m = SparseMatrix::new(all.len());
        for img in &images {
            m.push_row(img.terms().iter().map(|(y, c)| (index[y], c.clone())));
        }
        Ok(rank_exact(&m))
    };
    let embedded_rank = rank_of(&embedded)?;
    let big = hwv_basis(t, large, budget)?;
    let large_rank = rank_of(&big.multivectors())?;
    let g = kronecker_characters(t)?;
    let g_next = kronecker_characters(&t.rho(ell as u32, 1)?)?;
    let small_injective = lk.injective();
    let holds = !small_injective
        || (embedded_highest && embedded_rank == embedded.len() && large_rank == big.dim() && g <= g_next);
    Ok(StableInjectivityReport {
        lambda: t.to_string(),
        d,
        k,
        ell,
        small_dim: lk.source.dim(),
        small_injective,
        embedded_highest,
        large_dim: big.dim(),
        embedded_rank,
        large_rank,
        g: g.to_string(),
        g_next: g_next.to_string(),
        holds,
    })
}

/// Dimension of `⋀^n V` as a machine integer when it fits.
pub fn exterior_dim(dims: Dims, n: usize) -> Option<u64> {
    binomial(dims.cells(), n).to_u64()
}
