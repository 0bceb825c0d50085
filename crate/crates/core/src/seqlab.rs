//! Kronecker sequences `{g(ρ_k^n 𝝀)}`, their index range, `k`-complementarity,
//! and shape verdicts.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{coefficient_key, CoefficientCache, CoefficientRecord};
use crate::charkron::kronecker_characters;
use crate::cube::Dims;
use crate::error::{Error, Result};
use crate::hwv::{kronecker_hwv, DEFAULT_WEIGHT_BUDGET};
use crate::partition::PartitionTuple;

/// `ρ_k^n 𝝀`.
pub fn rho(t: &PartitionTuple, k: u32, n: i64) -> Result<PartitionTuple> {
    t.rho(k, n)
}

fn check_shape(t: &PartitionTuple, k: u32, d: usize) -> Result<()> {
    if t.d() != d {
        return Err(Error::Dimensions(format!("tuple {t} has {} entries, expected d = {d}", t.d())));
    }
    t.common_size()?;
    if t.max_part() > k {
        return Err(Error::OutOfRange(format!("{t} has a part larger than k = {k}")));
    }
    Ok(())
}

/// `[−b, k^{d−1} − a]` with `a = max ℓ(λ^(i))`, `b = min #{parts of λ^(i) equal to k}`.
pub fn sequence_range(t: &PartitionTuple, k: u32, d: usize) -> Result<(i64, i64)> {
    check_shape(t, k, d)?;
    let rows = (k as i64).pow(d as u32 - 1);
    let (a, b) = (t.max_len() as i64, t.min_parts_equal(k) as i64);
    if a > rows {
        return Err(Error::OutOfRange(format!("{t} has more than k^(d-1) = {rows} rows")));
    }
    Ok((-b, rows - a))
}

/// `ρ_k^{k^{d−1} − 2m/k} λ = (k^{d−1} × k) − λ` for every entry. Defined for even `k`.
pub fn k_complementary(t: &PartitionTuple, k: u32, d: usize) -> Result<bool> {
    if k % 2 == 1 {
        return Err(Error::OutOfRange(format!("k-complementarity needs even k, got {k}")));
    }
    check_shape(t, k, d)?;
    let m = t.common_size()? as i64;
    if (2 * m) % k as i64 != 0 {
        return Ok(false);
    }
    let rows = (k as usize).pow(d as u32 - 1);
    let shift = rows as i64 - 2 * m / k as i64;
    for p in t.entries() {
        let Ok(lhs) = p.rho(k, shift) else { return Ok(false) };
        let Ok(rhs) = p.complement_in_box(rows, k) else { return Ok(false) };
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Hwv,
    Characters,
    Both,
    /// `hwv` when the weight space fits the budget, `characters` otherwise.
    #[default]
    Auto,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hwv" => Ok(Backend::Hwv),
            "characters" => Ok(Backend::Characters),
            "both" => Ok(Backend::Both),
            "auto" => Ok(Backend::Auto),
            _ => Err(Error::Parse(format!("unknown backend {s:?}"))),
        }
    }
}

pub struct CoefficientOptions<'a> {
    pub backend: Backend,
    pub budget: usize,
    pub cache: Option<&'a CoefficientCache>,
}

impl Default for CoefficientOptions<'_> {
    fn default() -> Self {
        CoefficientOptions { backend: Backend::Auto, budget: DEFAULT_WEIGHT_BUDGET, cache: None }
    }
}

fn by_characters(t: &PartitionTuple, dims: Dims, cache: Option<&CoefficientCache>) -> Result<BigUint> {
    let key = coefficient_key(dims.d, dims.k, t);
    if let Some(rec) = cache.and_then(|c| c.get(&key)) {
        if let Ok(v) = rec.value.parse() {
            return Ok(v);
        }
        log::warn!("ignoring unparsable cached value for {key}");
    }
    let v = kronecker_characters(t)?;
    if let Some(c) = cache {
        c.put(CoefficientRecord { key, value: v.to_string() });
    }
    Ok(v)
}

/// One coefficient and the backend that produced it (`Both` when both ran and agreed).
pub fn coefficient(t: &PartitionTuple, dims: Dims, opts: &CoefficientOptions) -> Result<(BigUint, Backend)> {
    match opts.backend {
        Backend::Characters => Ok((by_characters(t, dims, opts.cache)?, Backend::Characters)),
        Backend::Hwv => Ok((BigUint::from(kronecker_hwv(t, dims, opts.budget)?), Backend::Hwv)),
        Backend::Both => {
            let h = BigUint::from(kronecker_hwv(t, dims, opts.budget)?);
            let c = kronecker_characters(t)?;
            if h != c {
                return Err(Error::Internal(format!("backends disagree on {t}: hwv {h}, characters {c}")));
            }
            Ok((h, Backend::Both))
        }
        Backend::Auto => match kronecker_hwv(t, dims, opts.budget) {
            Ok(h) => Ok((BigUint::from(h), Backend::Hwv)),
            Err(Error::Budget(_)) => Ok((by_characters(t, dims, opts.cache)?, Backend::Characters)),
            Err(e) => Err(e),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerSequence {
    pub base: PartitionTuple,
    pub d: usize,
    pub k: usize,
    pub range: (i64, i64),
    pub values: Vec<BigUint>,
    pub backends: Vec<Backend>,
}

/// `{g(ρ_k^n 𝝀)}` for `n` in the sequence range.
pub fn build_sequence(t: &PartitionTuple, dims: Dims, opts: &CoefficientOptions) -> Result<KroneckerSequence> {
    build_sequence_prefix(t, dims, opts, usize::MAX)
}

/// The first `len` entries of the sequence.
pub fn build_sequence_prefix(
    t: &PartitionTuple,
    dims: Dims,
    opts: &CoefficientOptions,
    len: usize,
) -> Result<KroneckerSequence> {
    let (lo, hi) = sequence_range(t, dims.k as u32, dims.d)?;
    let hi = hi.min(lo.saturating_add(i64::try_from(len).unwrap_or(i64::MAX)).saturating_sub(1));
    let entries: Vec<(BigUint, Backend)> = (lo..=hi)
        .into_par_iter()
        .map(|n| coefficient(&t.rho(dims.k as u32, n)?, dims, opts))
        .collect::<Result<_>>()?;
    let (values, backends) = entries.into_iter().unzip();
    Ok(KroneckerSequence { base: t.clone(), d: dims.d, k: dims.k, range: (lo, hi), values, backends })
}

/// Values one index past each end of the range, by characters; `None` below
/// when `ρ_k^{−b−1}` is undefined.
pub fn vanishing_beyond(seq: &KroneckerSequence) -> Result<(Option<BigUint>, BigUint)> {
    let k = seq.k as u32;
    let below = match seq.base.rho(k, seq.range.0 - 1) {
        Ok(t) => Some(kronecker_characters(&t)?),
        Err(_) => None,
    };
    let above = kronecker_characters(&seq.base.rho(k, seq.range.1 + 1)?)?;
    Ok((below, above))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub unimodal: bool,
    pub symmetric: bool,
    /// Positions `i` (0-based, interior) with `x_i² ≥ x_{i−1} x_{i+1}`.
    pub log_concave_at: Vec<usize>,
    pub log_concave: bool,
}

pub fn is_unimodal(x: &[BigUint]) -> bool {
    let mut i = 1;
    while i < x.len() && x[i - 1] <= x[i] {
        i += 1;
    }
    while i < x.len() && x[i - 1] >= x[i] {
        i += 1;
    }
    i >= x.len()
}

pub fn shape_report(x: &[BigUint]) -> ShapeReport {
    let symmetric = x.iter().eq(x.iter().rev());
    let interior = 1..x.len().saturating_sub(1);
    let log_concave_at: Vec<usize> = interior.clone().filter(|&i| &x[i] * &x[i] >= &x[i - 1] * &x[i + 1]).collect();
    let log_concave = log_concave_at.len() == interior.len();
    ShapeReport { unimodal: is_unimodal(x), symmetric, log_concave_at, log_concave }
}

/// JSON summary of a sequence with decimal-string values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub tuple: String,
    pub d: usize,
    pub k: usize,
    pub range: (i64, i64),
    pub values: Vec<String>,
    pub backends: Vec<Backend>,
    pub unimodal: bool,
    pub symmetric: bool,
    pub logconcave: Vec<usize>,
}

impl SequenceReport {
    pub fn new(seq: &KroneckerSequence) -> Self {
        let shape = shape_report(&seq.values);
        SequenceReport {
            tuple: seq.base.to_string(),
            d: seq.d,
            k: seq.k,
            range: seq.range,
            values: seq.values.iter().map(|v| v.to_string()).collect(),
            backends: seq.backends.clone(),
            unimodal: shape.unimodal,
            symmetric: shape.symmetric,
            logconcave: shape.log_concave_at,
        }
    }
}

/// Sequences through every `d`-tuple of partitions of `m ≤ m_max` with parts
/// at most `k`, one per base tuple.
pub fn sweep(dims: Dims, m_max: u32, opts: &CoefficientOptions) -> Result<Vec<(KroneckerSequence, ShapeReport)>> {
    let mut out = Vec::new();
    for m in 0..=m_max {
        for t in PartitionTuple::all(dims.d, m, dims.k as u32, dims.slice_size()) {
            let seq = build_sequence(&t, dims, opts)?;
            let shape = shape_report(&seq.values);
            out.push((seq, shape));
        }
    }
    Ok(out)
}
