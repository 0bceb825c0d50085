use num_bigint::BigInt;
use proptest::prelude::*;

use kronlef::cayley::{build_cayley, omega_power};
use kronlef::cube::{direct_sum, enumerate_magic_sets, magic_magnitude, marginals, CubeSet, Dims};
use kronlef::exterior::{Contraction, Multivector};
use kronlef::hwv::{apply_raising, hwv_basis};
use kronlef::latin::{at_number, DEFAULT_CELL_BUDGET};
use kronlef::lefschetz::{check_lp, iterate_direct};
use kronlef::partition::{Partition, PartitionTuple};
use kronlef::seqlab::build_sequence;
use kronlef::seqlab::{shape_report, CoefficientOptions};

fn d23() -> Dims {
    Dims::new(2, 3).unwrap()
}

fn set(dims: Dims) -> impl Strategy<Value = CubeSet> {
    any::<u128>().prop_map(move |b| CubeSet::from_mask(dims, b & dims.full_mask()).unwrap())
}

fn grade_set(dims: Dims, n: usize) -> impl Strategy<Value = CubeSet> {
    proptest::sample::subsequence((0..dims.cells()).collect::<Vec<_>>(), n)
        .prop_map(move |r| CubeSet::from_ranks(dims, &r).unwrap())
}

/// A homogeneous multivector of grade `n` with up to four terms.
fn homogeneous(dims: Dims, n: usize) -> impl Strategy<Value = Multivector> {
    proptest::collection::vec((grade_set(dims, n), -3i64..=3), 1..4).prop_map(move |terms| {
        let mut v = Multivector::zero(dims);
        for (x, c) in terms {
            v.add_term(x, BigInt::from(c));
        }
        v
    })
}

proptest! {
    #[test]
    fn marginals_sum_to_size(x in set(Dims::new(3, 3).unwrap())) {
        for s in marginals(&x).0 {
            prop_assert_eq!(s.iter().sum::<u32>() as usize, x.len());
        }
    }

    #[test]
    fn wedge_is_associative((u, v, w) in (0usize..=3, 0usize..=3, 0usize..=3)
        .prop_flat_map(|(a, b, c)| (homogeneous(d23(), a), homogeneous(d23(), b), homogeneous(d23(), c))))
    {
        let left = u.wedge(&v).unwrap().wedge(&w).unwrap();
        let right = u.wedge(&v.wedge(&w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn wedge_is_graded_commutative((a, b, u, v) in (0usize..=4, 0usize..=4)
        .prop_flat_map(|(a, b)| (Just(a), Just(b), homogeneous(d23(), a), homogeneous(d23(), b))))
    {
        let sign = BigInt::from(if (a * b) % 2 == 0 { 1 } else { -1 });
        prop_assert_eq!(u.wedge(&v).unwrap(), v.wedge(&u).unwrap().scale(&sign));
    }

    // ⟨u* ⌟ w, x⟩ = ⟨w, u ∧ x⟩
    #[test]
    fn contraction_is_adjoint_to_wedge(u in set(d23()), w in set(d23()), x in set(d23())) {
        let (u, w, x) = (Multivector::basis(u), Multivector::basis(w), Multivector::basis(x));
        let lhs = u.interior(&w, Contraction::Adjoint).unwrap().pairing(&x).unwrap();
        let rhs = w.pairing(&u.wedge(&x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn direct_sums_are_magic((t1, t2) in (1u32..=2).prop_flat_map(|n| {
        let a = enumerate_magic_sets(Dims::new(3, 2).unwrap(), n, 1000).unwrap();
        let b = enumerate_magic_sets(Dims::new(3, 3).unwrap(), n, 10_000).unwrap();
        (proptest::sample::select(a), proptest::sample::select(b))
    })) {
        let s = direct_sum(&t1, &t2).unwrap();
        prop_assert_eq!(s.len(), t1.len() + t2.len());
        prop_assert_eq!(magic_magnitude(&s), magic_magnitude(&t1));
    }

    #[test]
    fn hwv_vectors_are_annihilated(t in (0u32..=4).prop_flat_map(|m| {
        let parts = Partition::all(m, 2, 4);
        proptest::collection::vec(proptest::sample::select(parts), 3)
    })) {
        let t = PartitionTuple::new(t).unwrap();
        let dims = Dims::new(3, 2).unwrap();
        for v in hwv_basis(&t, dims, 10_000).unwrap().multivectors() {
            for dir in 0..3 {
                prop_assert!(apply_raising(&v, dir, 0).is_zero());
            }
        }
    }
}

#[test]
fn omega_powers_are_magic_weight_vectors() {
    for (d, k) in [(3, 2), (3, 3), (2, 3), (2, 4)] {
        let dims = Dims::new(d, k).unwrap();
        for n in 0..=dims.slice_size() {
            let p = omega_power(d, k, n).unwrap();
            let weight = vec![vec![n as u32; k]; d];
            for x in p.terms().keys() {
                assert_eq!(marginals(x).0, weight, "({d},{k}) n={n}");
            }
        }
    }
}

#[test]
fn omega_powers_match_iterated_lefschetz_operator() {
    let omega = build_cayley(3, 2).unwrap().body;
    let one = Multivector::one(omega.dims());
    for n in 0..=4 {
        assert_eq!(omega_power(3, 2, n).unwrap(), iterate_direct(&omega, &one, n).unwrap());
    }
}

#[test]
fn alon_tarsi_numbers_are_omega_coefficients() {
    let dims = Dims::new(3, 2).unwrap();
    for n in 0..=4u32 {
        let p = omega_power(3, 2, n as usize).unwrap();
        for t in enumerate_magic_sets(dims, n, 1000).unwrap() {
            let at = at_number(&t, DEFAULT_CELL_BUDGET).unwrap();
            assert_eq!(p.coefficient(&t).magnitude(), at.at.magnitude(), "{t}");
        }
    }
}

// Swapping two values multiplies the sign by (−1)^{dk}, so for odd dk and
// magnitude at least 2 the hypercubes pair off.
#[test]
fn odd_side_types_cancel() {
    let dims = Dims::new(3, 3).unwrap();
    for n in 2..=3 {
        for t in enumerate_magic_sets(dims, n, 10_000).unwrap().iter().step_by(37) {
            let at = at_number(t, DEFAULT_CELL_BUDGET).unwrap();
            assert_eq!(at.positive, at.negative, "{t}");
        }
    }
}

// Injective then surjective maps between consecutive HWV spaces force the
// dimensions to rise and then fall.
#[test]
fn lefschetz_ranks_certify_unimodality_at_k2() {
    let dims = Dims::new(3, 2).unwrap();
    let opts = CoefficientOptions::default();
    for m in 0..=4 {
        for t in PartitionTuple::all(3, m, 2, 4) {
            let v = check_lp(&t, dims, 10_000).unwrap();
            assert!(v.holds, "{t}");
            let pivot = (v.pivot.unwrap() - v.range.0) as usize;
            assert!(v.dims[..=pivot].windows(2).all(|w| w[0] <= w[1]), "{t}");
            assert!(v.dims[pivot..].windows(2).all(|w| w[0] >= w[1]), "{t}");
            let seq = build_sequence(&t, dims, &opts).unwrap();
            let g: Vec<usize> = seq.values.iter().map(|x| x.to_string().parse().unwrap()).collect();
            assert_eq!(g, v.dims, "{t}");
            assert!(shape_report(&seq.values).unimodal);
        }
    }
}
