//! The Cayley form `ω_{d,k}`, its wedge powers and relabeled copies.
//!
//! The defining sum runs over `(S_k)^d`; replacing every `π_j` by `π_j σ`
//! multiplies a term by `sgn(σ)^{d+1}`, so the sum is `k!` times the sum
//! with `π_1 = id` when `d` is odd and vanishes when `d` is even and `k ≥ 2`.
//! [`build_cayley`] returns the definition divided by `k!`, which has
//! coefficients `±1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::charkron::factorial;
use crate::cube::{marginals, CubeSet, Dims};
use crate::error::{Error, Result};
use crate::exterior::Multivector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyForm {
    pub dims: Dims,
    pub body: Multivector,
}

/// All permutations of `0..k` with their signs, in lexicographic order.
pub fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, i32)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], sign: i32, out: &mut Vec<(Vec<usize>, i32)>) {
        let k = used.len();
        if prefix.len() == k {
            out.push((prefix.clone(), sign));
            return;
        }
        // inversions created by the next entry: unused values smaller than it
        let mut smaller_unused = 0;
        for v in 0..k {
            if used[v] {
                continue;
            }
            used[v] = true;
            prefix.push(v);
            go(prefix, used, if smaller_unused % 2 == 0 { sign } else { -sign }, out);
            prefix.pop();
            used[v] = false;
            smaller_unused += 1;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(k), &mut vec![false; k], 1, &mut out);
    out
}

/// Sign of the permutation sorting `ranks` (all distinct).
fn sort_sign(ranks: &[usize]) -> i32 {
    let mut inv = 0usize;
    for i in 0..ranks.len() {
        for j in i + 1..ranks.len() {
            if ranks[i] > ranks[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Visits every tuple of `count` permutations from `perms`.
fn for_each_tuple(perms: &[(Vec<usize>, i32)], count: usize, mut f: impl FnMut(&[&Vec<usize>], i32)) {
    let mut idx = vec![0usize; count];
    loop {
        let chosen: Vec<&Vec<usize>> = idx.iter().map(|&i| &perms[i].0).collect();
        let sign = idx.iter().map(|&i| perms[i].1).product();
        f(&chosen, sign);
        let mut pos = count;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `ω_{d,k}` (normalized by `1/k!`).
pub fn build_cayley(d: usize, k: usize) -> Result<CayleyForm> {
    let dims = Dims::new(d, k)?;
    if d % 2 == 0 && k >= 2 {
        return Ok(CayleyForm { dims, body: Multivector::zero(dims) });
    }
    let body = if k == 2 { pairing_form(dims)? } else { identity_first_sum(dims)? };
    Ok(CayleyForm { dims, body })
}

/// Sum over `(π_2, …, π_d)` with `π_1 = id`: the cell of index `i` has first
/// coordinate `i`, so each term is already sorted.
fn identity_first_sum(dims: Dims) -> Result<Multivector> {
    let (d, k) = (dims.d, dims.k);
    let perms = permutations_with_sign(k);
    let mut out = Multivector::zero(dims);
    let mut coords = vec![0usize; d];
    let mut err = None;
    for_each_tuple(&perms, d - 1, |pis, sign| {
        let cells = (0..k).map(|i| {
            coords[0] = i + 1;
            for (j, p) in pis.iter().enumerate() {
                coords[j + 1] = p[i] + 1;
            }
            coords.clone()
        });
        match CubeSet::from_cells(dims, cells.collect::<Vec<_>>()) {
            Ok(x) => out.add_term(x, BigInt::from(sign)),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `Σ_{i ∈ I+} e_i ∧ e_ī` for `k = 2`, where `I+` holds the cells with an
/// even number of coordinates equal to 2 and `ī` is the antipode.
pub fn pairing_form(dims: Dims) -> Result<Multivector> {
    if dims.k != 2 {
        return Err(Error::Dimensions(format!("pairing form needs k = 2, got k = {}", dims.k)));
    }
    let mut out = Multivector::zero(dims);
    for r in 0..dims.cells() {
        let c = dims.coords(r);
        if c.iter().filter(|&&x| x == 2).count() % 2 != 0 {
            continue;
        }
        let bar: Vec<usize> = c.iter().map(|&x| 3 - x).collect();
        let rb = dims.rank(&bar)?;
        let pair = CubeSet::from_ranks(dims, &[r, rb])?;
        // e_i ∧ e_ī is +e_{sorted} when i precedes ī
        out.add_term(pair, BigInt::from(if r < rb { 1 } else { -1 }));
    }
    Ok(out)
}

/// The defining sum over all of `(S_k)^d`, before normalization.
pub fn cayley_definition_sum(d: usize, k: usize) -> Result<Multivector> {
    let dims = Dims::new(d, k)?;
    let perms = permutations_with_sign(k);
    let mut out = Multivector::zero(dims);
    let mut err = None;
    for_each_tuple(&perms, d, |pis, sign| {
        let ranks: Result<Vec<usize>> =
            (0..k).map(|i| dims.rank(&pis.iter().map(|p| p[i] + 1).collect::<Vec<_>>())).collect();
        match ranks.and_then(|r| CubeSet::from_ranks(dims, &r).map(|x| (sort_sign(&r), x))) {
            Ok((s, x)) => out.add_term(x, BigInt::from(sign * s)),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// The defining sum divided by `k!`, checking that the division is exact.
pub fn cayley_by_definition(d: usize, k: usize) -> Result<CayleyForm> {
    let dims = Dims::new(d, k)?;
    let sum = cayley_definition_sum(d, k)?;
    let kf = BigInt::from(factorial(k as u32));
    let mut body = Multivector::zero(dims);
    for (x, c) in sum.terms() {
        let (q, r) = c.div_rem(&kf);
        if !r.is_zero() {
            return Err(Error::Internal(format!("coefficient {c} of {x} not divisible by {k}!")));
        }
        body.add_term(*x, q);
    }
    Ok(CayleyForm { dims, body })
}

/// `ω^n` by iterated wedge; zero once `n` exceeds `k^{d-1}`.
pub fn omega_power(d: usize, k: usize, n: usize) -> Result<Multivector> {
    let omega = build_cayley(d, k)?;
    if n > omega.dims.slice_size() {
        return Ok(Multivector::zero(omega.dims));
    }
    Ok(omega.body.power(n))
}

/// The terms of `ω` whose cells all lie in `t`.
pub fn omega_restricted(omega: &CayleyForm, t: &CubeSet) -> Multivector {
    let mut out = Multivector::zero(omega.dims);
    for (x, c) in omega.body.terms() {
        if x.is_subset(t) {
            out.add_term(*x, c.clone());
        }
    }
    out
}

/// Coefficient of `e_T` in `ω^{|T|/k}`, computed from the terms of `ω` inside `T`.
pub fn omega_power_coefficient(t: &CubeSet) -> Result<BigInt> {
    let dims = t.dims();
    if t.len() % dims.k != 0 {
        return Ok(BigInt::zero());
    }
    let omega = build_cayley(dims.d, dims.k)?;
    let local = omega_restricted(&omega, t);
    Ok(local.power(t.len() / dims.k).coefficient(t))
}

/// Image of `ω_{d,k}` under the order-preserving relabeling `[k] → I_j` in
/// direction `j`, inside `[ℓ]^d`. Order-preserving maps keep cells sorted,
/// so coefficients are unchanged.
pub fn embed_omega(d: usize, ell: usize, subsets: &[Vec<usize>]) -> Result<Multivector> {
    if subsets.len() != d {
        return Err(Error::Dimensions(format!("need {d} index sets, got {}", subsets.len())));
    }
    let k = subsets[0].len();
    for s in subsets {
        if s.len() != k || s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&x| x == 0 || x > ell) {
            return Err(Error::OutOfRange(format!("{s:?} is not an increasing {k}-subset of [{ell}]")));
        }
    }
    let big = Dims::new(d, ell)?;
    let omega = build_cayley(d, k)?;
    embed(&omega.body, big, subsets)
}

/// Relabels a multivector on `[k]^d` into `[ℓ]^d` through increasing maps.
pub fn embed(v: &Multivector, big: Dims, subsets: &[Vec<usize>]) -> Result<Multivector> {
    let small = v.dims();
    let mut out = Multivector::zero(big);
    for (x, c) in v.terms() {
        let cells: Vec<Vec<usize>> = x
            .ranks()
            .map(|r| small.coords(r).iter().enumerate().map(|(j, &cj)| subsets[j][cj - 1]).collect())
            .collect();
        out.add_term(CubeSet::from_cells(big, cells)?, c.clone());
    }
    Ok(out)
}

/// One summand `ω_I ∧ ω_Ī` of the expansion of `ω_{d,ℓ}` with `I_1 = [k]`.
#[derive(Debug, Clone)]
pub struct DecompositionTerm {
    pub index: Vec<Vec<usize>>,
    pub sign: i32,
    pub product: Multivector,
}

/// Expands `ω_{d,ℓ} = Σ_{I : I_1 = [k]} ±ω_I ∧ ω_Ī`, determining each sign
/// from the coefficients and checking that the signed sum reproduces `ω_{d,ℓ}`.
pub fn decompose_omega(d: usize, k: usize, ell: usize) -> Result<Vec<DecompositionTerm>> {
    if k == 0 || k >= ell {
        return Err(Error::OutOfRange(format!("need 0 < k < ℓ, got k={k}, ℓ={ell}")));
    }
    let big = Dims::new(d, ell)?;
    let target = build_cayley(d, ell)?.body;
    let subsets = k_subsets(ell, k);
    let first: Vec<usize> = (1..=k).collect();
    let mut terms = Vec::new();
    let mut sum = Multivector::zero(big);
    let mut idx = vec![0usize; d - 1];
    loop {
        let mut index = vec![first.clone()];
        index.extend(idx.iter().map(|&i| subsets[i].clone()));
        let bar: Vec<Vec<usize>> = index.iter().map(|s| (1..=ell).filter(|x| !s.contains(x)).collect()).collect();
        let product = embed_omega(d, ell, &index)?.wedge(&embed_omega(d, ell, &bar)?)?;
        let (x, c) = product
            .terms()
            .iter()
            .next()
            .ok_or_else(|| Error::Internal(format!("ω_I ∧ ω_Ī vanishes for I = {index:?}")))?;
        let t = target.coefficient(x);
        let sign = if t == *c {
            1
        } else if t == -c {
            -1
        } else {
            return Err(Error::Internal(format!("coefficient mismatch at {x} for I = {index:?}")));
        };
        sum = &sum + &product.scale(&BigInt::from(sign));
        terms.push(DecompositionTerm { index, sign, product });
        let mut pos = d - 1;
        loop {
            if pos == 0 {
                if sum != target {
                    return Err(Error::Internal("signed expansion does not reproduce ω_{d,ℓ}".into()));
                }
                return Ok(terms);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < subsets.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Increasing `k`-subsets of `[n]` (1-based), lexicographic.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Checks that every term of `v` indexes a set with the given marginals.
pub fn has_weight(v: &Multivector, weight: &[Vec<u32>]) -> bool {
    v.terms().keys().all(|x| marginals(x).0 == weight)
}

/// `true` when every coefficient of `v` is `±1`.
pub fn is_unit_form(v: &Multivector) -> bool {
    v.terms().values().all(|c| c.is_one() || (-c).is_one())
}
