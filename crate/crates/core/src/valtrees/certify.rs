use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::search::{find_non_identity_self_hom_with_stats, find_valuated_hom_with_stats};
use super::{validate_tree, Pool, TreeHom, TreeViolation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "witness")]
pub enum Verdict {
    /// No valuated homomorphism exists (off-diagonal pairs).
    NoHom,
    /// The identity is the only valuated self-homomorphism (diagonal pairs).
    IdentityOnly,
    HomWitness(TreeHom),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub source: usize,
    pub target: usize,
    pub verdict: Verdict,
    pub expanded: u64,
}

/// Pairwise verdicts over a pool.
///
/// `rigid` covers the off-diagonal pairs, `strong` adds identity-only
/// self-homs. `sibling_distinct` records that no node of any tree has two
/// children of equal valuation; `admissible` (strong and sibling-distinct) is
/// what encoding requires by default. Strong rigidity alone does not make the
/// truncated module's endomorphisms scalar: a top-stratum basis vector can be
/// sent to a signed difference of two equal-valuation siblings in the tree
/// below it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub pool_id: String,
    pub depth: u32,
    pub seed: u64,
    pub rigid: bool,
    pub strong: bool,
    pub sibling_distinct: bool,
    pub admissible: bool,
    pub verdicts: Vec<PairVerdict>,
}

impl RigidityCertificate {
    pub fn verdict(&self, source: usize, target: usize) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.source == source && v.target == target).map(|v| &v.verdict)
    }

    pub fn total_expanded(&self) -> u64 {
        self.verdicts.iter().map(|v| v.expanded).sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("pool is empty")]
    Empty,
    #[error("tree {index} is invalid: {violation}")]
    InvalidTree { index: usize, violation: TreeViolation },
    #[error("trees {first} and {second} are identical; a pool may not repeat a tree")]
    Duplicate { first: usize, second: usize },
}

/// Certifies every ordered pair of the pool, in parallel over pairs.
pub fn certify_pool(pool: &Pool) -> Result<RigidityCertificate, CertifyError> {
    let trees = &pool.trees;
    if trees.is_empty() {
        return Err(CertifyError::Empty);
    }
    for (index, t) in trees.iter().enumerate() {
        validate_tree(t, Some(&pool.bounds())).map_err(|violation| CertifyError::InvalidTree { index, violation })?;
    }
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if trees[i] == trees[j] {
                return Err(CertifyError::Duplicate { first: i, second: j });
            }
        }
    }
    let n = trees.len();
    let verdicts: Vec<PairVerdict> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (source, target) = (k / n, k % n);
            let (verdict, stats) = if source == target {
                let (w, s) = find_non_identity_self_hom_with_stats(&trees[source]);
                (w.map_or(Verdict::IdentityOnly, Verdict::HomWitness), s)
            } else {
                let (w, s) = find_valuated_hom_with_stats(&trees[source], &trees[target]);
                (w.map_or(Verdict::NoHom, Verdict::HomWitness), s)
            };
            PairVerdict { source, target, verdict, expanded: stats.expanded }
        })
        .collect();
    let rigid = verdicts.iter().filter(|v| v.source != v.target).all(|v| v.verdict == Verdict::NoHom);
    let strong = rigid && verdicts.iter().filter(|v| v.source == v.target).all(|v| v.verdict == Verdict::IdentityOnly);
    let sibling_distinct = trees.iter().all(|t| t.is_sibling_distinct());
    Ok(RigidityCertificate {
        pool_id: pool.id(),
        depth: pool.depth,
        seed: pool.seed,
        rigid,
        strong,
        sibling_distinct,
        admissible: strong && sibling_distinct,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{check_tree_hom, ValuatedTree};
    use super::*;

    fn pool(trees: Vec<ValuatedTree>) -> Pool {
        Pool { lambda: 2, depth: 2, vmax: 3, seed: 0, trees }
    }

    fn tree_a() -> ValuatedTree {
        ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[0, 0], 2)])
    }

    fn tree_b() -> ValuatedTree {
        ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 2)])
    }

    #[test]
    fn incomparable_pair_is_strong() {
        let c = certify_pool(&pool(vec![tree_a(), tree_b()])).unwrap();
        assert!(c.rigid && c.strong && c.sibling_distinct && c.admissible);
        assert_eq!(c.verdict(0, 1), Some(&Verdict::NoHom));
        assert_eq!(c.verdict(1, 1), Some(&Verdict::IdentityOnly));
    }

    #[test]
    fn repeated_tree_is_rejected() {
        let err = certify_pool(&pool(vec![tree_a(), tree_a()])).unwrap_err();
        assert_eq!(err, CertifyError::Duplicate { first: 0, second: 1 });
    }

    #[test]
    fn collapsible_tree_breaks_strength() {
        let c_tree = ValuatedTree::from_slices(&[(&[], 3), (&[0], 1), (&[1], 1)]);
        let p = pool(vec![tree_a(), c_tree.clone()]);
        let c = certify_pool(&p).unwrap();
        assert!(c.rigid);
        assert!(!c.strong);
        let Some(Verdict::HomWitness(w)) = c.verdict(1, 1) else { panic!("expected a witness") };
        assert!(!w.is_identity());
        assert_eq!(check_tree_hom(&c_tree, &c_tree, w), Ok(()));
    }

    #[test]
    fn strong_but_not_sibling_distinct() {
        let x = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 2)]);
        let p_tree = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 4), (&[1, 0], 5)]);
        let q_tree = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 1), (&[0, 0], 2), (&[1, 0], 3)]);
        let p = Pool { lambda: 2, depth: 2, vmax: 5, seed: 0, trees: vec![x, p_tree, q_tree] };
        let c = certify_pool(&p).unwrap();
        assert!(c.strong);
        assert!(!c.sibling_distinct);
        assert!(!c.admissible);
    }
}
