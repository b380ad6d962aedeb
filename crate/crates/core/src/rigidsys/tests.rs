use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::encoder::{build_index_set, build_module, TreeAssignment};
use crate::exactlin::Scalar;
use crate::valtrees::{Pool, ValuatedTree};

fn t1() -> DistModule {
    let a = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[0, 0], 2)]);
    let pool = Pool { lambda: 2, depth: 2, vmax: 3, seed: 0, trees: vec![a] };
    let asg = TreeAssignment::sequential(&pool, 1).unwrap();
    let s = build_index_set(&pool, &asg, 1, false).unwrap();
    build_module(&pool, &s, &asg, Field::Rational).unwrap()
}

fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

fn divisible(base: &DistModule, u: &[usize], primes: &PrimeAssignment) -> DivisibleModule {
    build_divisible(&build_module_u_positions(base, u).unwrap(), primes).unwrap()
}

fn default_primes(base: &DistModule) -> PrimeAssignment {
    PrimeAssignment::default_for(base.keys().chain([WIndex::D2]))
}

fn rat(n: i64, d: i64) -> Scalar {
    Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn vector(rank: usize, entries: &[(usize, Scalar)]) -> SparseVec {
    SparseVec::new(Field::Rational, rank, entries.iter().cloned()).unwrap()
}

#[test]
fn toy_grid_is_fully_rigid() {
    let base = t1();
    let report = check_fully_rigid(&base, &all_subsets(3)).unwrap();
    assert_eq!(report.cells.len(), 64);
    assert!(report.all_pass, "{:?}", report.cells.iter().find(|c| c.verdict == Verdict::Fail));
    for c in &report.cells {
        assert_eq!(c.dim, usize::from(c.contained));
    }
}

#[test]
fn grid_flags_a_non_rigid_base() {
    let m = DistModule::synthetic(Field::Rational, 2, Default::default()).unwrap();
    let report = check_fully_rigid(&m, &[vec![0], vec![0, 1]]).unwrap();
    assert!(!report.all_pass);
}

#[test]
fn divisible_hom_follows_inclusion() {
    let base = t1();
    let primes = default_primes(&base);
    for u in all_subsets(3) {
        for v in all_subsets(3) {
            let r = hom_divisible(&divisible(&base, &u, &primes), &divisible(&base, &v, &primes), &[]).unwrap();
            let contained = u.iter().all(|x| v.contains(x));
            assert_eq!(r.result, if contained { DivisibleHom::Integers } else { DivisibleHom::Zero });
        }
    }
}

#[test]
fn default_probes_are_rejected() {
    let base = t1();
    let primes = default_primes(&base);
    let m = divisible(&base, &[0], &primes);
    let r = hom_divisible(&m, &m, &default_probes(2, 3)).unwrap();
    let integ = r.integrality.unwrap();
    assert_eq!((integ.p0, integ.p1), (2, 3));
    assert_eq!(integ.probes.len(), 2);
    assert!(integ.probes.iter().all(|p| !p.accepted));
    assert!(integ.probes[0].in_p0_hull && !integ.probes[0].in_p1_hull);
    let one = integrality_probe(&BigRational::one(), 2, 3);
    assert!(one.accepted);
}

#[test]
fn prime_permutation_does_not_change_hom() {
    let base = t1();
    let primes = default_primes(&base);
    let swaps = [(WIndex::D0, WIndex::D1), (WIndex::D1, WIndex::D2), (WIndex::D0, WIndex::L3 { k: 0, n: 0 })];
    for (a, b) in swaps {
        let other = primes.swapped(a, b);
        for u in all_subsets(3) {
            for v in all_subsets(3) {
                let x = hom_divisible(&divisible(&base, &u, &primes), &divisible(&base, &v, &primes), &[]).unwrap();
                let y = hom_divisible(&divisible(&base, &u, &other), &divisible(&base, &v, &other), &[]).unwrap();
                assert_eq!(x.result, y.result);
            }
        }
    }
}

#[test]
fn divisible_inputs_are_validated() {
    let base = t1();
    let primes = default_primes(&base);
    assert_eq!(build_divisible(&base, &primes), Err(RigidError::NotSubsetIndexed));
    let f5 = build_module_u_positions(&base.over(Field::Prime(5)).unwrap(), &[0]).unwrap();
    assert_eq!(build_divisible(&f5, &primes), Err(RigidError::NotRational(Field::Prime(5))));
    let short = PrimeAssignment::explicit([(WIndex::D0, 2), (WIndex::D1, 3)]).unwrap();
    let u = build_module_u_positions(&base, &[0]).unwrap();
    assert!(matches!(build_divisible(&u, &short), Err(RigidError::MissingPrime(_))));
    let a = divisible(&base, &[0], &primes);
    let b = divisible(&base, &[0], &primes.swapped(WIndex::D0, WIndex::D1));
    assert_eq!(hom_divisible(&a, &b, &[]), Err(RigidError::ProvenanceMismatch));
}

#[test]
fn non_rigid_base_is_reported() {
    let mut slots = std::collections::BTreeMap::new();
    slots.insert(WIndex::D2, vec![]);
    let m = DistModule::synthetic(Field::Rational, 2, slots).unwrap();
    let primes = PrimeAssignment::default_for(m.keys());
    let d = build_divisible(&m, &primes).unwrap();
    assert_eq!(hom_divisible(&d, &d, &[]), Err(RigidError::BaseNotRigid { dim: 4 }));
}

#[test]
fn bottom_vector_divided_by_its_slot_prime() {
    let base = t1();
    let primes = default_primes(&base);
    let m = divisible(&base, &[0], &primes);
    let p1 = primes.get(WIndex::D1).unwrap();
    assert_eq!(p1, 3);
    let x = vector(3, &[(0, rat(1, 3))]);
    assert!(!bounded_membership(&x, &m, 0));
    assert!(bounded_membership(&x, &m, 1));
}

#[test]
fn foreign_prime_never_enters() {
    let base = t1();
    let primes = default_primes(&base);
    let m = divisible(&base, &[0], &primes);
    let used: Vec<u64> = primes.iter().map(|(_, p)| p).collect();
    let r = (2u64..).find(|&n| crate::exactlin::is_prime(n) && !used.contains(&n)).unwrap();
    let x = vector(3, &[(0, rat(1, r as i64))]);
    for n in 0..=8 {
        assert!(!bounded_membership(&x, &m, n), "n = {n}");
    }
}

/// Solves `Σ c_i rows_i = x` over ℚ for a square invertible system and reports
/// whether the coefficients are integers.
fn rational_oracle(rows: &[Vec<i64>], x: &[i64]) -> Option<bool> {
    let n = rows.len();
    // Transpose: unknowns are the c_i, equation j reads Σ_i c_i rows_i[j] = x_j.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut eq: Vec<BigRational> = (0..n).map(|i| BigRational::from_integer(rows[i][j].into())).collect();
            eq.push(BigRational::from_integer(x[j].into()));
            eq
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
    }
    Some(a.iter().all(|row| row[n].is_integer()))
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #[test]
    fn lattice_contains_integer_combinations(
        rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5),
        coefs in prop::collection::vec(-4i64..=4, 5),
    ) {
        let mut x = vec![0i64; 3];
        for (r, c) in rows.iter().zip(&coefs) {
            for j in 0..3 {
                x[j] += c * r[j];
            }
        }
        let l = IntLattice::from_rows(3, rows.iter().map(|r| big(r)).collect());
        prop_assert!(l.contains(&big(&x)));
    }

    #[test]
    fn lattice_agrees_with_rational_solve(
        rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 3),
        x in prop::collection::vec(-12i64..=12, 3),
    ) {
        if let Some(expected) = rational_oracle(&rows, &x) {
            let l = IntLattice::from_rows(3, rows.iter().map(|r| big(r)).collect());
            prop_assert_eq!(l.rank(), 3);
            prop_assert_eq!(l.contains(&big(&x)), expected);
        }
    }

    #[test]
    fn membership_is_monotone_in_depth(
        nums in prop::collection::vec(-6i64..=6, 3),
        dens in prop::collection::vec(prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 9, 7, 11]), 3),
        subset in prop::sample::select(all_subsets(3)),
    ) {
        let base = t1();
        let m = divisible(&base, &subset, &default_primes(&base));
        let entries: Vec<(usize, Scalar)> = (0..3).map(|i| (i, rat(nums[i], dens[i]))).collect();
        let x = vector(3, &entries);
        let mut seen = false;
        for n in 0..5 {
            let now = bounded_membership(&x, &m, n);
            prop_assert!(!seen || now, "membership lost at n = {}", n);
            seen = now;
        }
    }

    #[test]
    fn subset_grid_pattern_holds_on_the_toy(
        subsets in prop::collection::vec(prop::sample::select(all_subsets(3)), 1..5),
    ) {
        let report = check_fully_rigid(&t1(), &subsets).unwrap();
        prop_assert!(report.all_pass);
    }
}
