use num_bigint::BigUint;
use proptest::prelude::*;

use kronlef::cube::Dims;
use kronlef::partition::{Partition, PartitionTuple};
use kronlef::seqlab::{
    build_sequence, k_complementary, rho, sequence_range, shape_report, sweep, Backend, CoefficientOptions,
};

fn characters() -> CoefficientOptions<'static> {
    CoefficientOptions { backend: Backend::Characters, ..Default::default() }
}

fn values(t: &str, d: usize, k: usize) -> Vec<BigUint> {
    build_sequence(&t.parse().unwrap(), Dims::new(d, k).unwrap(), &characters()).unwrap().values
}

fn nums(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

// x_n² ≥ x_{n−1} x_{n+1}
fn concave_at(x: &[BigUint], n: usize) -> bool {
    &x[n] * &x[n] >= &x[n - 1] * &x[n + 1]
}

fn convex_at(x: &[BigUint], n: usize) -> bool {
    &x[n] * &x[n] <= &x[n - 1] * &x[n + 1]
}

#[test]
fn full_complementary_example_is_symmetric() {
    let x = values("4,2;2,2,2;3,2,1", 3, 4);
    assert_eq!(x, nums(&[1, 15, 128, 728, 2684, 6395, 9884, 9884, 6395, 2684, 728, 128, 15, 1]));
    let r = shape_report(&x);
    assert!(r.unimodal && r.symmetric && r.log_concave);
}

#[test]
fn single_box_sequence_is_eventually_log_concave() {
    let x = values("1;1;1", 3, 4);
    assert_eq!(x, nums(&[1, 1, 2, 6, 19, 58, 120, 179, 195, 145, 77, 30, 9, 2, 1, 1]));
    assert_eq!(shape_report(&x).log_concave_at, (4..=12).collect::<Vec<_>>());
}

#[test]
fn rectangular_sequences_alternate() {
    let x = values(";;;;", 5, 2);
    for n in 1..x.len() - 1 {
        if n % 2 == 0 {
            assert!(concave_at(&x, n), "n = {n}");
        } else {
            assert!(convex_at(&x, n), "n = {n}");
        }
    }
    let y = values(";;", 3, 4);
    for n in 4..=12 {
        if n % 2 == 0 {
            assert!(concave_at(&y, n), "n = {n}");
        } else {
            assert!(convex_at(&y, n), "n = {n}");
        }
    }
}

#[test]
fn two_column_sweep_is_unimodal_and_symmetric() {
    let dims = Dims::new(3, 2).unwrap();
    let all = sweep(dims, 6, &characters()).unwrap();
    // partitions of m ≤ 6 with parts ≤ 2 and at most 4 rows: 1,1,2,2,3,2,2
    assert_eq!(all.len(), 1 + 1 + 8 + 8 + 27 + 8 + 8);
    for (seq, shape) in &all {
        assert!(shape.unimodal && shape.symmetric, "{}: {:?}", seq.base, seq.values);
        assert!(k_complementary(&seq.base, 2, 3).unwrap());
    }
}

#[test]
fn complementary_tuples_give_symmetric_sequences_at_k4() {
    let dims = Dims::new(3, 4).unwrap();
    let mut seen = 0;
    for t in ["2;2;2", "3,1;2,2;4", "2,2;2,2;3,1", "1,1;1,1;2"] {
        let t: PartitionTuple = t.parse().unwrap();
        if k_complementary(&t, 4, 3).unwrap() {
            let seq = build_sequence(&t, dims, &characters()).unwrap();
            assert!(shape_report(&seq.values).symmetric, "{t}");
            seen += 1;
        }
    }
    assert_eq!(seen, 3);
}

#[test]
fn backends_agree_on_small_sequences() {
    let both = CoefficientOptions { backend: Backend::Both, ..Default::default() };
    for (t, k, len) in [("2,1;2,1;2,1", 2, 3), ("1;1;1", 3, 3), ("2;1,1;2", 3, 3), ("1;1;1", 4, 2)] {
        let dims = Dims::new(3, k).unwrap();
        let t: PartitionTuple = t.parse().unwrap();
        let (lo, _) = sequence_range(&t, k as u32, 3).unwrap();
        let seq = kronlef::seqlab::build_sequence_prefix(&t, dims, &both, len).unwrap();
        assert_eq!(seq.range.0, lo);
        assert!(seq.backends.iter().all(|b| *b == Backend::Both));
    }
}

fn two_column_partition(m: u32) -> impl Strategy<Value = Partition> {
    (0..=m / 2).prop_map(move |twos| Partition::new([vec![2; twos as usize], vec![1; (m - 2 * twos) as usize]].concat()).unwrap())
}

proptest! {
    #[test]
    fn two_column_tuples_are_2_complementary(
        (a, b, c) in (0u32..=8).prop_flat_map(|m| (two_column_partition(m), two_column_partition(m), two_column_partition(m)))
    ) {
        let t = PartitionTuple::new(vec![a, b, c]).unwrap();
        prop_assume!(t.max_len() <= 4);
        prop_assert!(k_complementary(&t, 2, 3).unwrap());
    }

    #[test]
    fn rho_inverts(parts in proptest::collection::vec(1u32..=4, 0..6), n in 0i64..6) {
        let mut parts = parts;
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let t = PartitionTuple::repeat(Partition::new(parts).unwrap(), 3);
        let up = rho(&t, 4, n).unwrap();
        prop_assert_eq!(rho(&up, 4, -n).unwrap(), t.clone());
        prop_assert_eq!(up.min_parts_equal(4), t.min_parts_equal(4) + n as usize);
    }
}
