use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{DistModule, EncodeError, Provenance, SIndex, WIndex};
use crate::exactlin::{Field, SparseVec};
use crate::valtrees::Pool;

/// Which pool tree hangs above each prefix η̄ of length below the truncation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(SIndex, usize)>", into = "Vec<(SIndex, usize)>")]
pub struct TreeAssignment {
    map: BTreeMap<SIndex, usize>,
}

impl From<Vec<(SIndex, usize)>> for TreeAssignment {
    fn from(v: Vec<(SIndex, usize)>) -> Self {
        TreeAssignment { map: v.into_iter().collect() }
    }
}

impl From<TreeAssignment> for Vec<(SIndex, usize)> {
    fn from(a: TreeAssignment) -> Self {
        a.map.into_iter().collect()
    }
}

impl TreeAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, prefix: SIndex, tree: usize) {
        self.map.insert(prefix, tree);
    }

    pub fn tree_for(&self, prefix: &SIndex) -> Option<usize> {
        self.map.get(prefix).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SIndex, usize)> + '_ {
        self.map.iter().map(|(s, t)| (s, *t))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Hands out pool trees 0, 1, 2, … to the prefixes of S₀, …, S_{N−1} in
    /// basis order.
    pub fn sequential(pool: &Pool, truncation: u32) -> Result<Self, EncodeError> {
        let mut a = TreeAssignment::new();
        let mut stratum = vec![SIndex::root()];
        let mut required = 0usize;
        for _ in 0..truncation {
            let mut next = Vec::new();
            for eta in &stratum {
                if required < pool.trees.len() {
                    a.insert(eta.clone(), required);
                    next.extend(pool.trees[required].non_root().map(|nu| eta.extend(nu)));
                }
                required += 1;
            }
            next.sort();
            stratum = next;
        }
        if required > pool.trees.len() {
            return Err(EncodeError::PoolTooSmall { required, available: pool.trees.len() });
        }
        Ok(a)
    }
}

/// The index set S, stratum by stratum; S_n holds the labels of length n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    strata: Vec<Vec<SIndex>>,
}

impl IndexSet {
    pub fn strata(&self) -> &[Vec<SIndex>] {
        &self.strata
    }

    pub fn truncation(&self) -> u32 {
        (self.strata.len() - 1) as u32
    }

    /// Basis order: stratum by stratum, lexicographic within a stratum.
    pub fn basis(&self) -> Vec<SIndex> {
        self.strata.iter().flatten().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.strata.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Unfolds S₀ = {⊥}, S_{n+1} = {η̄^⟨ν⟩ : η̄ ∈ S_n, ⊥ ≠ ν ∈ T_η̄} up to S_N.
///
/// Each prefix of length below N must be assigned a pool tree, and distinct
/// prefixes must receive distinct trees unless `allow_repetition` is set.
pub fn build_index_set(
    pool: &Pool,
    assignment: &TreeAssignment,
    truncation: u32,
    allow_repetition: bool,
) -> Result<IndexSet, EncodeError> {
    let mut strata = vec![vec![SIndex::root()]];
    let mut used: HashMap<usize, SIndex> = HashMap::new();
    for n in 0..truncation as usize {
        let mut next = Vec::new();
        for eta in &strata[n] {
            let tree = assignment.tree_for(eta).ok_or_else(|| EncodeError::MissingPrefix(eta.clone()))?;
            let t = pool.trees.get(tree).ok_or(EncodeError::UnknownTree { prefix: eta.clone(), tree })?;
            if let Some(first) = used.get(&tree) {
                if !allow_repetition {
                    return Err(EncodeError::NotInjective { tree, first: first.clone(), second: eta.clone() });
                }
            } else {
                used.insert(tree, eta.clone());
            }
            next.extend(t.non_root().map(|nu| eta.extend(nu)));
        }
        next.sort();
        strata.push(next);
    }
    Ok(IndexSet { strata })
}

fn unit(field: Field, dim: usize, i: usize) -> SparseVec {
    SparseVec::unit(field, dim, i)
}

fn difference(field: Field, dim: usize, a: usize, b: usize) -> SparseVec {
    SparseVec::new(field, dim, [(a, field.one()), (b, field.from_i64(-1))]).expect("indices in range")
}

/// Assembles the module on the basis of `s` with all distinguished slots:
///
/// * D0: e_⊥ − e_η̄ for η̄ ≠ ⊥; D1: e_⊥.
/// * L1(n,k), 1 ≤ k ≤ D: e_{η̄^⟨ν↾k−1⟩} − e_{η̄^⟨ν⟩} for η̄ ∈ S_n, ν of level k.
/// * L2(n,k), 1 ≤ k ≤ D: e_{η̄^⟨ν⟩} for η̄ ∈ S_n, ν of level k.
/// * L3(k,n), 0 ≤ k ≤ Vmax: e_{η̄^⟨ν⟩} for η̄ ∈ S_n, ν of valuation k, ⊥ included.
///
/// Slots with no generators are kept.
pub fn build_module(
    pool: &Pool,
    s: &IndexSet,
    assignment: &TreeAssignment,
    field: Field,
) -> Result<DistModule, EncodeError> {
    let basis = s.basis();
    let rank = basis.len();
    let pos: HashMap<&SIndex, usize> = basis.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut slots: BTreeMap<WIndex, Vec<SparseVec>> = BTreeMap::new();

    slots.insert(WIndex::D0, (1..rank).map(|i| difference(field, rank, 0, i)).collect());
    slots.insert(WIndex::D1, vec![unit(field, rank, 0)]);

    let truncation = s.truncation();
    for n in 0..truncation {
        for k in 1..=pool.depth {
            slots.insert(WIndex::L1 { n, k }, Vec::new());
            slots.insert(WIndex::L2 { n, k }, Vec::new());
        }
        for k in 0..=pool.vmax {
            slots.insert(WIndex::L3 { k, n }, Vec::new());
        }
        for eta in &s.strata()[n as usize] {
            let tree = assignment.tree_for(eta).ok_or_else(|| EncodeError::MissingPrefix(eta.clone()))?;
            let t = pool.trees.get(tree).ok_or(EncodeError::UnknownTree { prefix: eta.clone(), tree })?;
            for nu in t.nodes() {
                let here = pos[&eta.extend(nu)];
                let k = nu.level() as u32;
                if k >= 1 {
                    let below = pos[&eta.extend(&nu.prefix(nu.level() - 1))];
                    push(&mut slots, WIndex::L1 { n, k }, difference(field, rank, below, here))?;
                    push(&mut slots, WIndex::L2 { n, k }, unit(field, rank, here))?;
                }
                let v = t.valuation(nu).expect("validated tree");
                push(&mut slots, WIndex::L3 { k: v, n }, unit(field, rank, here))?;
            }
        }
    }

    let provenance = Provenance {
        lambda: pool.lambda,
        depth: pool.depth,
        truncation,
        vmax: pool.vmax,
        pool_id: pool.id(),
        assignment: assignment.clone(),
        certified: false,
        subset: None,
    };
    DistModule::from_parts(field, basis, slots, Some(provenance))
}

fn push(slots: &mut BTreeMap<WIndex, Vec<SparseVec>>, w: WIndex, g: SparseVec) -> Result<(), EncodeError> {
    match slots.get_mut(&w) {
        Some(v) => {
            v.push(g);
            Ok(())
        }
        None => Err(EncodeError::OutOfBounds(w)),
    }
}

/// Adds the subset slot D2 = ⊕_{η̄∈U} R e_η̄ to a base module; every other slot
/// is copied unchanged.
pub fn build_module_u(base: &DistModule, u: &[SIndex]) -> Result<DistModule, EncodeError> {
    let pos = base.positions();
    let mut idx = BTreeSet::new();
    for label in u {
        idx.insert(*pos.get(label).ok_or_else(|| EncodeError::NotInBasis(label.clone()))?);
    }
    with_subset(base, idx)
}

/// As [`build_module_u`], with U given by basis positions.
pub fn build_module_u_positions(base: &DistModule, u: &[usize]) -> Result<DistModule, EncodeError> {
    let mut idx = BTreeSet::new();
    for &i in u {
        if i >= base.rank() {
            return Err(EncodeError::PositionOutOfRange { index: i, rank: base.rank() });
        }
        idx.insert(i);
    }
    with_subset(base, idx)
}

fn with_subset(base: &DistModule, idx: BTreeSet<usize>) -> Result<DistModule, EncodeError> {
    if base.slot(WIndex::D2).is_some() {
        return Err(EncodeError::AlreadySubsetIndexed);
    }
    let field = base.field();
    let mut slots = base.slots().clone();
    slots.insert(WIndex::D2, idx.iter().map(|&i| unit(field, base.rank(), i)).collect());
    let provenance = base.provenance().cloned().map(|mut p| {
        p.subset = Some(idx.into_iter().collect());
        p
    });
    DistModule::from_parts(field, base.basis().to_vec(), slots, provenance)
}
