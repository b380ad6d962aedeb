use super::*;
use crate::exactlin::{rref, Field, SparseVec};
use crate::valtrees::{Pool, ValuatedTree};

fn tree_a() -> ValuatedTree {
    ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[0, 0], 2)])
}

fn tree_b() -> ValuatedTree {
    ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 2)])
}

fn t1_pool() -> Pool {
    Pool { lambda: 2, depth: 2, vmax: 3, seed: 0, trees: vec![tree_a()] }
}

fn t1_module(field: Field) -> DistModule {
    let pool = t1_pool();
    let a = TreeAssignment::sequential(&pool, 1).unwrap();
    let s = build_index_set(&pool, &a, 1, false).unwrap();
    build_module(&pool, &s, &a, field).unwrap()
}

fn q(v: &[i64]) -> SparseVec {
    SparseVec::from_i64s(Field::Rational, v)
}

#[test]
fn t1_index_set() {
    let pool = t1_pool();
    let a = TreeAssignment::sequential(&pool, 1).unwrap();
    let s = build_index_set(&pool, &a, 1, false).unwrap();
    assert_eq!(s.strata()[0], vec![SIndex::root()]);
    assert_eq!(s.strata()[1], vec![SIndex::from_slices(&[&[0]]), SIndex::from_slices(&[&[0, 0]])]);
    assert_eq!(s.len(), 3);
}

#[test]
fn zero_truncation_is_rank_one() {
    let pool = t1_pool();
    let a = TreeAssignment::sequential(&pool, 0).unwrap();
    let s = build_index_set(&pool, &a, 0, false).unwrap();
    let m = build_module(&pool, &s, &a, Field::Rational).unwrap();
    assert_eq!(m.rank(), 1);
    assert_eq!(m.slot(WIndex::D0), Some(&[][..]));
    assert_eq!(m.slot(WIndex::D1), Some(&[q(&[1])][..]));
}

#[test]
fn repeated_assignment_is_refused() {
    let pool = Pool { lambda: 2, depth: 2, vmax: 3, seed: 0, trees: vec![tree_a(), tree_b()] };
    let mut a = TreeAssignment::new();
    a.insert(SIndex::root(), 0);
    a.insert(SIndex::from_slices(&[&[0]]), 1);
    a.insert(SIndex::from_slices(&[&[0, 0]]), 1);
    let err = build_index_set(&pool, &a, 2, false).unwrap_err();
    assert!(matches!(err, EncodeError::NotInjective { tree: 1, .. }));
    assert!(build_index_set(&pool, &a, 2, true).is_ok());
}

#[test]
fn missing_prefix_is_named() {
    let pool = Pool { lambda: 2, depth: 2, vmax: 3, seed: 0, trees: vec![tree_a(), tree_b()] };
    let mut a = TreeAssignment::new();
    a.insert(SIndex::root(), 0);
    a.insert(SIndex::from_slices(&[&[0]]), 1);
    let err = build_index_set(&pool, &a, 2, false).unwrap_err();
    assert_eq!(err, EncodeError::MissingPrefix(SIndex::from_slices(&[&[0, 0]])));
}

#[test]
fn sequential_assignment_needs_enough_trees() {
    let err = TreeAssignment::sequential(&t1_pool(), 2).unwrap_err();
    assert_eq!(err, EncodeError::PoolTooSmall { required: 3, available: 1 });
}

#[test]
fn t1_generators() {
    let m = t1_module(Field::Rational);
    assert_eq!(m.rank(), 3);
    assert_eq!(m.slot(WIndex::D1).unwrap(), &[q(&[1, 0, 0])]);
    assert_eq!(m.slot(WIndex::D0).unwrap(), &[q(&[1, -1, 0]), q(&[1, 0, -1])]);
    assert_eq!(m.slot(WIndex::L1 { n: 0, k: 1 }).unwrap(), &[q(&[1, -1, 0])]);
    assert_eq!(m.slot(WIndex::L1 { n: 0, k: 2 }).unwrap(), &[q(&[0, 1, -1])]);
    assert_eq!(m.slot(WIndex::L2 { n: 0, k: 1 }).unwrap(), &[q(&[0, 1, 0])]);
    assert_eq!(m.slot(WIndex::L2 { n: 0, k: 2 }).unwrap(), &[q(&[0, 0, 1])]);
    assert_eq!(m.slot(WIndex::L3 { k: 2, n: 0 }).unwrap(), &[q(&[0, 0, 1])]);
    assert_eq!(m.slot(WIndex::L3 { k: 0, n: 0 }).unwrap(), &[q(&[1, 0, 0])]);
    assert_eq!(m.slot(WIndex::L3 { k: 3, n: 0 }), Some(&[][..]));
    assert_eq!(m.slot(WIndex::D2), None);
    let keys: Vec<String> = m.keys().map(|w| w.to_string()).collect();
    assert_eq!(
        keys,
        ["D0", "D1", "L1(0,1)", "L1(0,2)", "L2(0,1)", "L2(0,2)", "L3(0,0)", "L3(1,0)", "L3(2,0)", "L3(3,0)"]
    );
}

#[test]
fn subset_slot() {
    let m = t1_module(Field::Rational);
    let empty = build_module_u(&m, &[]).unwrap();
    assert_eq!(empty.slot(WIndex::D2), Some(&[][..]));
    let root = build_module_u(&m, &[SIndex::root()]).unwrap();
    assert_eq!(root.slot(WIndex::D2).unwrap(), &[q(&[1, 0, 0])]);
    let all = build_module_u(&m, m.basis()).unwrap();
    assert_eq!(all.slot(WIndex::D2).unwrap().len(), 3);
    for (w, gens) in m.slots() {
        assert_eq!(all.slot(*w).unwrap(), gens.as_slice());
    }
    let stray = SIndex::from_slices(&[&[1]]);
    assert_eq!(build_module_u(&m, std::slice::from_ref(&stray)).unwrap_err(), EncodeError::NotInBasis(stray));
    assert_eq!(all.provenance().unwrap().subset, Some(vec![0, 1, 2]));
}

#[test]
fn module_json_round_trip_is_exact() {
    for field in [Field::Rational, Field::Prime(5)] {
        let m = build_module_u(&t1_module(field), &[SIndex::root()]).unwrap();
        let text = serde_json::to_string_pretty(&m).unwrap();
        let back: DistModule = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }
}

#[test]
fn module_json_shape() {
    let m = t1_module(Field::Rational);
    let v = serde_json::to_value(&m).unwrap();
    assert_eq!(v["field"], "Q");
    assert_eq!(v["basis"], serde_json::json!([[], [[0]], [[0, 0]]]));
    assert_eq!(v["submodules"][0]["w"], "D0");
    assert_eq!(v["submodules"][0]["gens"][0], serde_json::json!([[0, "1/1"], [1, "-1/1"]]));
    let f2 = serde_json::to_value(t1_module(Field::Prime(2))).unwrap();
    assert_eq!(f2["submodules"][0]["gens"][0], serde_json::json!([[0, 1], [1, 1]]));
}

fn two_level_module() -> (Pool, DistModule) {
    let x = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 2), (&[1, 0], 3)]);
    let y = ValuatedTree::from_slices(&[(&[], 1), (&[0], 2)]);
    let z = ValuatedTree::from_slices(&[(&[], 2), (&[1], 0)]);
    let w = ValuatedTree::from_slices(&[(&[], 3), (&[0], 0), (&[1], 3)]);
    let pool = Pool { lambda: 2, depth: 2, vmax: 3, seed: 0, trees: vec![x, y, z, w] };
    let a = TreeAssignment::sequential(&pool, 2).unwrap();
    let s = build_index_set(&pool, &a, 2, false).unwrap();
    let m = build_module(&pool, &s, &a, Field::Rational).unwrap();
    (pool, m)
}

#[test]
fn stratum_sizes_follow_the_recursion() {
    let (pool, m) = two_level_module();
    let a = &m.provenance().unwrap().assignment;
    let s = build_index_set(&pool, a, 2, false).unwrap();
    for n in 0..2 {
        let expected: usize = s.strata()[n].iter().map(|eta| pool.trees[a.tree_for(eta).unwrap()].len() - 1).sum();
        assert_eq!(s.strata()[n + 1].len(), expected);
    }
    assert_eq!(m.rank(), 1 + 3 + (1 + 1 + 2));
}

#[test]
fn slot_ranks_match_tree_statistics() {
    let (pool, m) = two_level_module();
    let a = &m.provenance().unwrap().assignment;
    let s = build_index_set(&pool, a, 2, false).unwrap();
    let f = Field::Rational;
    for n in 0..2u32 {
        let trees: Vec<&ValuatedTree> =
            s.strata()[n as usize].iter().map(|e| &pool.trees[a.tree_for(e).unwrap()]).collect();
        for k in 1..=pool.depth {
            let gens = m.slot(WIndex::L2 { n, k }).unwrap();
            let expected: usize = trees.iter().map(|t| t.level(k as usize).len()).sum();
            assert_eq!(rref(f, m.rank(), gens).unwrap().rank(), expected);
        }
        for k in 0..=pool.vmax {
            let gens = m.slot(WIndex::L3 { k, n }).unwrap();
            let expected: usize = trees.iter().map(|t| t.with_valuation(k).len()).sum();
            assert_eq!(rref(f, m.rank(), gens).unwrap().rank(), expected);
        }
    }
}

#[test]
fn f0_and_f1_split_the_module() {
    let (_, m) = two_level_module();
    let f = Field::Rational;
    let d0 = m.slot(WIndex::D0).unwrap();
    let d1 = m.slot(WIndex::D1).unwrap();
    assert_eq!(rref(f, m.rank(), d0).unwrap().rank(), m.rank() - 1);
    assert_eq!(rref(f, m.rank(), d1).unwrap().rank(), 1);
    let both: Vec<SparseVec> = d0.iter().chain(d1).cloned().collect();
    assert_eq!(rref(f, m.rank(), &both).unwrap().rank(), m.rank());
}

#[test]
fn level_and_valuation_slots_are_disjoint() {
    let (pool, m) = two_level_module();
    let support =
        |w: WIndex| -> Vec<usize> { m.slot(w).unwrap().iter().flat_map(|g| g.support().collect::<Vec<_>>()).collect() };
    for n in 0..2 {
        for k in 1..=pool.depth {
            for k2 in k + 1..=pool.depth {
                let a = support(WIndex::L2 { n, k });
                assert!(support(WIndex::L2 { n, k: k2 }).iter().all(|i| !a.contains(i)));
            }
        }
        for k in 0..=pool.vmax {
            for k2 in k + 1..=pool.vmax {
                let a = support(WIndex::L3 { k, n });
                assert!(support(WIndex::L3 { k: k2, n }).iter().all(|i| !a.contains(i)));
            }
        }
    }
}

#[test]
fn edge_differences_share_prefix_and_live_in_adjacent_levels() {
    let (pool, m) = two_level_module();
    let a = &m.provenance().unwrap().assignment;
    let s = build_index_set(&pool, a, 2, false).unwrap();
    let pos = m.positions();
    let f = Field::Rational;
    for n in 0..2u32 {
        let stratum: Vec<SparseVec> =
            s.strata()[n as usize].iter().map(|e| SparseVec::unit(f, m.rank(), pos[e])).collect();
        for k in 1..=pool.depth {
            let mut span: Vec<SparseVec> = m.slot(WIndex::L2 { n, k }).unwrap().to_vec();
            if k > 1 {
                span.extend_from_slice(m.slot(WIndex::L2 { n, k: k - 1 }).unwrap());
            }
            span.extend(stratum.iter().cloned());
            let basis = rref(f, m.rank(), &span).unwrap();
            for g in m.slot(WIndex::L1 { n, k }).unwrap() {
                assert!(basis.contains(g));
                let labels: Vec<&SIndex> = g.support().map(|i| &m.basis()[i]).collect();
                assert_eq!(labels.len(), 2);
                assert_eq!(labels[0].prefix(n as usize), labels[1].prefix(n as usize));
            }
        }
    }
}
