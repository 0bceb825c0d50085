//! Weight spaces of `⋀V`, raising operators, and highest weight vectors.
//!
//! The public entry points take Kronecker labels `𝝀`; the weight of the
//! corresponding highest weight space is the tuple of conjugates `𝝀'`,
//! padded to length `k`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cube::{enumerate_with_marginals, marginals, CubeSet, Dims};
use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::linalg::{SparseMatrix, SparseRow};
use crate::partition::PartitionTuple;

pub const DEFAULT_WEIGHT_BUDGET: usize = 50_000;

/// A weight: `d` vectors of length `k`.
pub type Weight = Vec<Vec<u32>>;

#[derive(Debug, Clone)]
pub struct WeightSpaceBasis {
    pub dims: Dims,
    pub weight: Weight,
    pub basis: Vec<CubeSet>,
    index: HashMap<CubeSet, usize>,
}

impl WeightSpaceBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, x: &CubeSet) -> Option<usize> {
        self.index.get(x).copied()
    }
}

pub fn enumerate_weight_basis(dims: Dims, weight: &[Vec<u32>], budget: usize) -> Result<WeightSpaceBasis> {
    let basis = enumerate_with_marginals(dims, weight, budget)?;
    let index = basis.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    Ok(WeightSpaceBasis { dims, weight: weight.to_vec(), basis, index })
}

/// Checks the constraints on `𝝀` and returns the weight `𝝀'`.
pub fn weight_of(t: &PartitionTuple, dims: Dims) -> Result<Weight> {
    if t.d() != dims.d {
        return Err(Error::Dimensions(format!("tuple {t} has {} entries, expected d = {}", t.d(), dims.d)));
    }
    t.common_size()?;
    let rows = dims.slice_size();
    let mut out = Vec::with_capacity(dims.d);
    for p in t.entries() {
        if p.first() as usize > dims.k || p.len() > rows {
            return Err(Error::OutOfRange(format!("{p} does not fit in a {rows}×{} box", dims.k)));
        }
        let c = p.conjugate();
        out.push((0..dims.k).map(|i| c.part(i)).collect());
    }
    Ok(out)
}

/// `𝝀` recovered from a dominant weight.
pub fn tuple_of(weight: &[Vec<u32>]) -> Result<PartitionTuple> {
    let entries = weight
        .iter()
        .map(|w| crate::partition::Partition::new(w.clone()).map(|p| p.conjugate()))
        .collect::<Result<Vec<_>>>()?;
    PartitionTuple::new(entries)
}

/// `E_{i,i+1}` on tensor factor `dir` (both 0-based, `i + 1 < k`), extended
/// to `e_X` as a derivation: each cell with coordinate `i+1` in direction
/// `dir` is lowered to `i` in place, then the wedge is re-sorted.
pub fn raise_basis(x: &CubeSet, dir: usize, i: usize) -> Vec<(CubeSet, i32)> {
    let dims = x.dims();
    let step = dims.k.pow((dims.d - 1 - dir) as u32);
    let bits = x.mask();
    let mut out = Vec::new();
    for r in x.ranks() {
        if dims.coord(r, dir) != i + 2 {
            continue;
        }
        let target = r - step;
        if bits >> target & 1 == 1 {
            continue;
        }
        let between = bits & ((1u128 << r) - 1) & !((1u128 << (target + 1)) - 1);
        let sign = if between.count_ones() % 2 == 0 { 1 } else { -1 };
        let y = CubeSet::from_mask(dims, (bits & !(1u128 << r)) | 1u128 << target).expect("same cube");
        out.push((y, sign));
    }
    out
}

pub fn apply_raising(v: &Multivector, dir: usize, i: usize) -> Multivector {
    let mut out = Multivector::zero(v.dims());
    for (x, c) in v.terms() {
        for (y, s) in raise_basis(x, dir, i) {
            out.add_term(y, if s > 0 { c.clone() } else { -c });
        }
    }
    out
}

/// `v` is annihilated by every `E_{i,i+1}` in every direction.
pub fn is_highest_weight(v: &Multivector) -> bool {
    let dims = v.dims();
    (0..dims.d).all(|dir| (0..dims.k - 1).all(|i| apply_raising(v, dir, i).is_zero()))
}

/// Matrix of `E_{i,i+1}` in direction `dir` from `source` to the raised weight space.
pub fn raising_matrix(source: &WeightSpaceBasis, dir: usize, i: usize, budget: usize) -> Result<(WeightSpaceBasis, SparseMatrix)> {
    let dims = source.dims;
    if dir >= dims.d || i + 1 >= dims.k {
        return Err(Error::OutOfRange(format!("no raising operator E_({},{}) in direction {}", i + 1, i + 2, dir + 1)));
    }
    let mut w = source.weight.clone();
    if w[dir][i + 1] == 0 {
        // nothing to lower: the operator is zero and has no target weight
        return Ok((empty_space(dims, &w), SparseMatrix::new(source.len())));
    }
    w[dir][i] += 1;
    w[dir][i + 1] -= 1;
    let target = enumerate_weight_basis(dims, &w, budget)?;
    let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); target.len()];
    for (col, x) in source.basis.iter().enumerate() {
        for (y, s) in raise_basis(x, dir, i) {
            let row = target.position(&y).ok_or_else(|| Error::Internal(format!("{y} missing from raised weight space")))?;
            rows[row].push((col, BigInt::from(s)));
        }
    }
    let mut m = SparseMatrix::new(source.len());
    for r in rows {
        m.push_row(r);
    }
    Ok((target, m))
}

fn empty_space(dims: Dims, w: &[Vec<u32>]) -> WeightSpaceBasis {
    WeightSpaceBasis { dims, weight: w.to_vec(), basis: Vec::new(), index: HashMap::new() }
}

/// Exact basis of a highest weight space, as primitive integer vectors in
/// the coordinates of the weight basis.
#[derive(Debug, Clone)]
pub struct HwvBasis {
    pub tuple: PartitionTuple,
    pub ambient: WeightSpaceBasis,
    /// `(free column, vector)`: each vector is nonzero at its free column and
    /// zero at the free columns of all the others.
    pub vectors: Vec<(usize, SparseRow)>,
}

impl HwvBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn multivector(&self, idx: usize) -> Multivector {
        let mut v = Multivector::zero(self.ambient.dims);
        for (c, x) in &self.vectors[idx].1 {
            v.add_term(self.ambient.basis[*c], x.clone());
        }
        v
    }

    pub fn multivectors(&self) -> Vec<Multivector> {
        (0..self.dim()).map(|i| self.multivector(i)).collect()
    }

    /// Coordinates of `v` in this basis, or `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &Multivector) -> Result<Option<Vec<BigRational>>> {
        if v.dims() != self.ambient.dims {
            let (a, b) = (v.dims(), self.ambient.dims);
            return Err(Error::DimensionMismatch { d1: a.d, k1: a.k, d2: b.d, k2: b.k });
        }
        let mut dense: Vec<BigInt> = vec![BigInt::zero(); self.ambient.len()];
        for (x, c) in v.terms() {
            match self.ambient.position(x) {
                Some(p) => dense[p] = c.clone(),
                None => return Ok(None),
            }
        }
        let coords: Vec<BigRational> = self
            .vectors
            .iter()
            .map(|(f, vec)| {
                let lead = &vec.iter().find(|e| e.0 == *f).expect("free entry").1;
                BigRational::new(dense[*f].clone(), lead.clone())
            })
            .collect();
        // residual must vanish exactly
        let mut residual: Vec<BigRational> = dense.into_iter().map(BigRational::from_integer).collect();
        for (c, (_, vec)) in coords.iter().zip(&self.vectors) {
            for (col, x) in vec {
                residual[*col] -= c * BigRational::from_integer(x.clone());
            }
        }
        Ok(residual.iter().all(Zero::is_zero).then_some(coords))
    }
}

/// Joint kernel of all raising operators on the weight space of `𝝀'`.
pub fn hwv_basis(t: &PartitionTuple, dims: Dims, budget: usize) -> Result<HwvBasis> {
    let weight = weight_of(t, dims)?;
    let ambient = enumerate_weight_basis(dims, &weight, budget)?;
    let mut row_of: HashMap<(usize, usize, CubeSet), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, BigInt)>> = Vec::new();
    for (col, x) in ambient.basis.iter().enumerate() {
        for dir in 0..dims.d {
            for i in 0..dims.k - 1 {
                for (y, s) in raise_basis(x, dir, i) {
                    let next = rows.len();
                    let r = *row_of.entry((dir, i, y)).or_insert(next);
                    if r == next {
                        rows.push(Vec::new());
                    }
                    rows[r].push((col, BigInt::from(s)));
                }
            }
        }
    }
    let mut m = SparseMatrix::new(ambient.len());
    for r in rows {
        m.push_row(r);
    }
    let vectors = crate::linalg::row_reduce(&m).kernel_basis();
    Ok(HwvBasis { tuple: t.clone(), ambient, vectors })
}

/// `g(𝝀) = dim HWV_{𝝀'} ⋀^m V`.
pub fn kronecker_hwv(t: &PartitionTuple, dims: Dims, budget: usize) -> Result<usize> {
    Ok(hwv_basis(t, dims, budget)?.dim())
}

/// The longest Weyl element in every direction: `x_j ↦ k + 1 − x_j`.
/// Reversing all `n` cells of a sorted set contributes `(−1)^{n(n−1)/2}`.
pub fn reverse_cells(v: &Multivector) -> Multivector {
    let dims = v.dims();
    let n = dims.cells();
    let mut out = Multivector::zero(dims);
    for (x, c) in v.terms() {
        let ranks: Vec<usize> = x.ranks().map(|r| n - 1 - r).collect();
        let y = CubeSet::from_ranks(dims, &ranks).expect("same cube");
        let len = x.len();
        let sign = if (len * len.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
        out.add_term(y, if sign > 0 { c.clone() } else { -c });
    }
    out
}

/// Result of transporting a highest weight space through the Hodge star.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct HodgeReport {
    pub tuple: PartitionTuple,
    pub complement: PartitionTuple,
    pub dim: usize,
    pub complement_dim: usize,
    /// Every image is a highest weight vector of the complementary weight.
    pub images_highest: bool,
    pub images_independent: bool,
}

/// Applies `w_0 ∘ ⋆` to a basis of `HWV_{𝝀'}`. In basis coordinates `⋆`
/// sends highest weight vectors to lowest weight vectors; `w_0` turns them
/// back into highest weight vectors of weight `(k × k^{d−1})^d − 𝝀'`.
pub fn hodge_transport(t: &PartitionTuple, dims: Dims, budget: usize) -> Result<HodgeReport> {
    let basis = hwv_basis(t, dims, budget)?;
    let complement = t.complement_in_box(dims.slice_size(), dims.k as u32)?;
    let target = hwv_basis(&complement, dims, budget)?;
    let mut images_highest = true;
    let mut m = SparseMatrix::new(target.ambient.len());
    for v in basis.multivectors() {
        let img = reverse_cells(&v.hodge_star()?);
        let weight_ok = img.terms().keys().all(|x| marginals(x).0 == target.ambient.weight);
        images_highest &= weight_ok && is_highest_weight(&img);
        match target.coordinates(&img)? {
            Some(c) => m.push_row(crate::linalg::integer_rows(&[c]).rows()[0].clone()),
            None => images_highest = false,
        }
    }
    let images_independent = crate::linalg::rank_exact(&m) == basis.dim();
    Ok(HodgeReport {
        tuple: t.clone(),
        complement,
        dim: basis.dim(),
        complement_dim: target.dim(),
        images_highest,
        images_independent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_cayley;
    use crate::charkron::kronecker_characters;

    fn tuple(s: &str) -> PartitionTuple {
        s.parse().unwrap()
    }

    #[test]
    fn weight_basis_examples() {
        let dims = Dims::new(3, 2).unwrap();
        let b = enumerate_weight_basis(dims, &[vec![0, 0], vec![0, 0], vec![0, 0]], 10).unwrap();
        assert_eq!(b.basis, vec![CubeSet::empty(dims)]);
        let b = enumerate_weight_basis(dims, &[vec![2, 0], vec![1, 1], vec![1, 1]], 10).unwrap();
        let texts: Vec<String> = b.basis.iter().map(|x| x.to_text().unwrap()).collect();
        assert_eq!(texts, vec!["111,122", "112,121"]);
    }

    #[test]
    fn raising_kills_extremes_and_omega() {
        let dims = Dims::new(3, 3).unwrap();
        let corner = Multivector::basis(CubeSet::parse_text(dims, "111").unwrap());
        assert!(is_highest_weight(&corner));
        let lower = Multivector::basis(CubeSet::parse_text(dims, "211").unwrap());
        assert!(!is_highest_weight(&lower));
        for (d, k) in [(3, 2), (3, 3), (3, 4), (5, 2)] {
            assert!(is_highest_weight(&build_cayley(d, k).unwrap().body), "d={d} k={k}");
        }
    }

    #[test]
    fn slice_vector_is_highest() {
        let dims = Dims::new(3, 4).unwrap();
        let slice = CubeSet::from_mask(dims, dims.slice_mask(0, 1)).unwrap();
        assert!(is_highest_weight(&Multivector::basis(slice)));
    }

    #[test]
    fn raising_matrix_matches_operator() {
        let dims = Dims::new(3, 3).unwrap();
        let src = enumerate_weight_basis(dims, &[vec![1, 1, 1], vec![2, 1, 0], vec![1, 1, 1]], 1000).unwrap();
        let (tgt, m) = raising_matrix(&src, 0, 1, 1000).unwrap();
        assert_eq!(tgt.weight[0], vec![1, 2, 0]);
        for (col, x) in src.basis.iter().enumerate() {
            let img = apply_raising(&Multivector::basis(*x), 0, 1);
            for (row, r) in m.rows().iter().enumerate() {
                let got = r.iter().find(|e| e.0 == col).map(|e| e.1.clone()).unwrap_or_default();
                assert_eq!(got, img.coefficient(&tgt.basis[row]));
            }
        }
        assert!(raising_matrix(&src, 0, 2, 10).is_err());
    }

    #[test]
    fn trivial_dimensions() {
        for k in 1..=3 {
            let dims = Dims::new(3, k).unwrap();
            assert_eq!(kronecker_hwv(&tuple("1;1;1"), dims, 100).unwrap(), 1);
        }
        let dims = Dims::new(3, 2).unwrap();
        assert!(kronecker_hwv(&tuple("2;1,1;1"), dims, 100).is_err());
        assert!(kronecker_hwv(&tuple("3;3;3"), dims, 100).is_err());
    }

    #[test]
    fn basis_vectors_are_highest_and_coordinates_work() {
        let dims = Dims::new(3, 2).unwrap();
        let b = hwv_basis(&tuple("2,2;2,2;2,2"), dims, 1000).unwrap();
        assert_eq!(BigInt::from(b.dim()), kronecker_characters(&tuple("2,2;2,2;2,2")).unwrap().into());
        let vs = b.multivectors();
        let mut sum = Multivector::zero(dims);
        for (i, v) in vs.iter().enumerate() {
            assert!(is_highest_weight(v));
            sum = &sum + &v.scale(&BigInt::from(i as i64 + 2));
        }
        let c = b.coordinates(&sum).unwrap().unwrap();
        let want: Vec<BigRational> = (0..vs.len()).map(|i| BigRational::from_integer(BigInt::from(i as i64 + 2))).collect();
        assert_eq!(c, want);
        let outside = Multivector::basis(b.ambient.basis[0]);
        if !is_highest_weight(&outside) {
            assert_eq!(b.coordinates(&outside).unwrap(), None);
        }
    }

    #[test]
    fn agrees_with_characters_on_small_tuples() {
        let dims = Dims::new(3, 2).unwrap();
        for m in 0..=4 {
            for t in PartitionTuple::all(3, m, 2, 4) {
                let g = kronecker_characters(&t).unwrap();
                assert_eq!(BigInt::from(kronecker_hwv(&t, dims, 10_000).unwrap()), g.into(), "{t}");
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        let dims = Dims::new(3, 3).unwrap();
        let t = tuple("3,1;2,1,1;2,2");
        let g = kronecker_hwv(&t, dims, 10_000).unwrap();
        for order in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            assert_eq!(kronecker_hwv(&t.permuted(&order), dims, 10_000).unwrap(), g);
        }
    }

    #[test]
    fn hodge_transport_small() {
        let dims = Dims::new(3, 2).unwrap();
        for t in [tuple(";;"), tuple("1;1;1"), tuple("2;1,1;1,1"), tuple("2,1;2,1;2,1")] {
            let r = hodge_transport(&t, dims, 10_000).unwrap();
            assert_eq!(r.dim, r.complement_dim, "{t}");
            assert!(r.images_highest && r.images_independent, "{t}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let dims = Dims::new(3, 3).unwrap();
        assert!(matches!(hwv_basis(&tuple("3,3;3,3;3,3"), dims, 5), Err(Error::Budget(_))));
    }
}
