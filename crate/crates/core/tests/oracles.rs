mod common;

use common::*;
use fixindex::families::{family_map, fiber_matrix, WitnessBase};
use fixindex::fixtheory::torus_nielsen;
use fixindex::groups::{surface_presentation, HomToZn};
use fixindex::polyalg::vanishes_at;
use fixindex::{lattice_index, zero_iterates, AffineSelfmap, FixError, IntMatrix, LatticeIndex};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const LIMIT: usize = 5000;

fn small_square(max_n: usize, bound: i64) -> impl Strategy<Value = Mat> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::vec((-bound..=bound).prop_map(i128::from), n), n)
    })
}

fn surface_map(l: &Mat, r: &Mat, g: u32) -> AffineSelfmap {
    let base = surface_presentation(g).unwrap();
    let rho = HomToZn::new(&base, from_mat(r)).unwrap();
    AffineSelfmap::new(base, rho, from_mat(l)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lattice_index_matches_coset_count(
        n in 1usize..=3,
        extra in 0usize..=2,
        seed in proptest::collection::vec(-6i64..=6, 15),
    ) {
        let cols = n + extra;
        let a: Mat = (0..n).map(|i| (0..cols).map(|j| seed[(i * cols + j) % seed.len()] as i128).collect()).collect();
        let got = lattice_index(&from_mat(&a));
        match Quotient::new(n, &columns(&a)) {
            None => prop_assert_eq!(got, LatticeIndex::Infinite),
            Some(q) => {
                if let Some(count) = q.order(LIMIT) {
                    prop_assert_eq!(got, LatticeIndex::Finite(BigInt::from(count)));
                }
            }
        }
    }

    #[test]
    fn projection_index_matches_enumeration(
        l in small_square(3, 2),
        g in 2u32..=4,
        k in 1u64..=3,
        rseed in proptest::collection::vec(-3i64..=3, 24),
    ) {
        let n = l.len();
        let cols = 2 * g as usize;
        let r: Mat = (0..n).map(|i| (0..cols).map(|j| rseed[(i * cols + j) % rseed.len()] as i128).collect()).collect();
        let det = cofactor_det(&sub(&identity(n), &power(&l, k)));
        let map = surface_map(&l, &r, g);
        if det == 0 {
            prop_assert_eq!(map.fixed_projection_index(k), Err(FixError::ZeroBranch { k }));
        } else if det.abs() <= LIMIT as i128 {
            let expected = projection_index_oracle(&l, &r, k, LIMIT).unwrap();
            let got = map.fixed_projection_index(k).unwrap();
            prop_assert_eq!(&got, &BigInt::from(expected));
            prop_assert!((BigInt::from(det.abs()) % got).is_zero());
        }
    }

    #[test]
    fn torus_nielsen_is_cokernel_order(l in small_square(3, 2), k in 1u64..=3) {
        let n = l.len();
        let a = sub(&identity(n), &power(&l, k));
        let nie = torus_nielsen(&from_mat(&l), k).unwrap();
        match Quotient::new(n, &columns(&a)) {
            None => prop_assert!(nie.is_zero()),
            Some(q) => {
                if let Some(count) = q.order(LIMIT) {
                    prop_assert_eq!(nie, BigInt::from(count));
                }
            }
        }
    }

    #[test]
    fn zero_branch_reachable_exactly_at_predicted_iterates(l in small_square(3, 2), k in 1u64..=12) {
        let lm = from_mat(&l);
        let ds = zero_iterates(&lm).unwrap();
        let base = surface_presentation(2).unwrap();
        let rho = HomToZn::zero(&base, l.len()).unwrap();
        let map = AffineSelfmap::new(base, rho, lm).unwrap();
        prop_assert_eq!(map.nielsen_zero_branch(k).is_ok(), vanishes_at(&ds, k));
        prop_assert_eq!(map.full_report(k, -2).unwrap().zero_branch, vanishes_at(&ds, k));
    }

    #[test]
    fn theta_solves_psi(l in small_square(3, 3), useed in proptest::collection::vec(-5i64..=5, 8)) {
        let n = l.len();
        prop_assume!(cofactor_det(&sub(&l, &identity(n))) != 0);
        let r: Mat = (0..n).map(|i| (0..4).map(|j| ((i + 2 * j) % 3) as i128 - 1).collect()).collect();
        let map = surface_map(&l, &r, 2);
        let index = map.gamma_prime_index().unwrap();
        let u: Vec<BigInt> = useed[..4].iter().map(|&x| BigInt::from(x) * &index).collect();
        let x = map.theta_vector(&u).unwrap();
        let lhs = map.psi().unwrap().mul_vec(&x).unwrap();
        prop_assert_eq!(lhs, map.rho().apply(&u).unwrap());
        // the bound [Gamma : Gamma'] <= |det(L - I)|
        prop_assert!(index <= map.psi().unwrap().det().unwrap().abs());
    }
}

#[test]
fn projection_index_independent_of_k_for_families() {
    for n in 1..=3usize {
        for m in 1..=8u64 {
            for g in [2u32, 3] {
                let map = family_map(WitnessBase::Surface { genus: g }, n, m).unwrap();
                let ds = zero_iterates(map.fiber()).unwrap();
                for k in 1..=6 {
                    if vanishes_at(&ds, k) {
                        continue;
                    }
                    assert_eq!(map.fixed_projection_index(k).unwrap(), BigInt::from(m), "n={n} m={m} k={k}");
                }
            }
        }
    }
}

#[test]
fn family_projection_index_matches_enumeration() {
    for n in 1..=2usize {
        for m in 1..=6u64 {
            let l = to_mat(&fiber_matrix(n, m).unwrap());
            let mut r = vec![vec![0i128; 4]; n];
            r[0][0] = 1;
            for k in 1..=2 {
                assert_eq!(projection_index_oracle(&l, &r, k, 100_000), Some(m as usize), "n={n} m={m} k={k}");
            }
        }
    }
}

#[test]
fn oracle_sanity() {
    // Z^2 / <(2, 0), (0, 3)> has 6 cosets; (1, 0) has order 2 there.
    let q = Quotient::new(2, &[vec![2, 0], vec![0, 3]]).unwrap();
    assert_eq!(q.order(100), Some(6));
    assert_eq!(q.subgroup_order(&[vec![1, 0]], 100), Some(2));
    assert!(Quotient::new(2, &[vec![1, 2], vec![2, 4]]).is_none());
    let m = IntMatrix::from_rows(&[[3, 1], [1, 2]]);
    assert_eq!(cofactor_det(&to_mat(&m)), 5);
}
