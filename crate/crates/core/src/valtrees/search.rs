use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Node, TreeHom, ValuatedTree};

/// Counters from one search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Candidate assignments tried by the backtracking loop.
    pub expanded: u64,
    /// Node pairs examined while building the feasibility table.
    pub pairs_checked: u64,
}

/// `feasible[(ν, τ)]`: the subtree rooted at ν maps into the subtree rooted at
/// τ with ν ↦ τ. Holds iff valuations agree and every child of ν has some
/// feasible child of τ; children map independently, so this is exact.
struct Feasibility<'a> {
    table: HashMap<(&'a Node, &'a Node), bool>,
}

impl<'a> Feasibility<'a> {
    fn build(src: &'a ValuatedTree, dst: &'a ValuatedTree, stats: &mut SearchStats) -> Self {
        let mut table = HashMap::new();
        let mut src_order = src.level_order();
        src_order.reverse();
        for nu in src_order {
            for tau in dst.level(nu.level()) {
                stats.pairs_checked += 1;
                let ok = src.valuation(nu) == dst.valuation(tau)
                    && src
                        .children(nu)
                        .into_iter()
                        .all(|c| dst.children(tau).into_iter().any(|d| table.get(&(c, d)).copied().unwrap_or(false)));
                table.insert((nu, tau), ok);
            }
        }
        Feasibility { table }
    }

    fn get(&self, nu: &Node, tau: &Node) -> bool {
        self.table.get(&(nu, tau)).copied().unwrap_or(false)
    }
}

/// First valuated homomorphism `src → dst`, if any.
///
/// Nodes of `src` are assigned in level order; a node's candidates are the
/// children of its parent's image with equal valuation, tried in lexicographic
/// order. Candidates whose subtree cannot be completed are pruned, so the
/// returned witness is the lexicographically first one in that order.
pub fn find_valuated_hom(src: &ValuatedTree, dst: &ValuatedTree) -> Option<TreeHom> {
    find_valuated_hom_with_stats(src, dst).0
}

pub fn find_valuated_hom_with_stats(src: &ValuatedTree, dst: &ValuatedTree) -> (Option<TreeHom>, SearchStats) {
    let mut stats = SearchStats::default();
    let feas = Feasibility::build(src, dst, &mut stats);
    let root = Node::root();
    if !feas.get(&root, &root) {
        return (None, stats);
    }
    let order: Vec<&Node> = src.level_order();
    let mut mapping: BTreeMap<Node, Node> = BTreeMap::new();
    let found = assign(src, dst, &feas, &order, 0, &mut mapping, &mut stats);
    (found.then(|| TreeHom::from_map(mapping)), stats)
}

fn assign(
    src: &ValuatedTree,
    dst: &ValuatedTree,
    feas: &Feasibility<'_>,
    order: &[&Node],
    i: usize,
    mapping: &mut BTreeMap<Node, Node>,
    stats: &mut SearchStats,
) -> bool {
    let Some(&nu) = order.get(i) else {
        return true;
    };
    let candidates: Vec<&Node> = match nu.parent() {
        None => vec![nu],
        Some(p) => dst.children(&mapping[&p]),
    };
    for tau in candidates {
        stats.expanded += 1;
        if src.valuation(nu) != dst.valuation(tau) || !feas.get(nu, tau) {
            continue;
        }
        mapping.insert(nu.clone(), tau.clone());
        if assign(src, dst, feas, order, i + 1, mapping, stats) {
            return true;
        }
        mapping.remove(nu);
    }
    false
}

/// A valuated self-homomorphism of `t` other than the identity, if one exists.
///
/// Such a map exists iff some node ν ≠ ⊥ can be sent to a sibling τ ≠ ν with
/// the subtree of ν mapping into the subtree of τ: take the shallowest node
/// moved by any non-identity self-hom. The witness is the identity outside the
/// subtree of the first such ν.
pub fn find_non_identity_self_hom(t: &ValuatedTree) -> Option<TreeHom> {
    find_non_identity_self_hom_with_stats(t).0
}

pub fn find_non_identity_self_hom_with_stats(t: &ValuatedTree) -> (Option<TreeHom>, SearchStats) {
    let mut stats = SearchStats::default();
    let feas = Feasibility::build(t, t, &mut stats);
    for nu in t.level_order() {
        let Some(parent) = nu.parent() else { continue };
        for tau in t.children(&parent) {
            stats.expanded += 1;
            if tau == nu || !feas.get(nu, tau) {
                continue;
            }
            let mut mapping: BTreeMap<Node, Node> =
                t.nodes().filter(|m| !m.starts_with(nu)).map(|m| (m.clone(), m.clone())).collect();
            mapping.insert(nu.clone(), tau.clone());
            let sub: Vec<&Node> = t.level_order().into_iter().filter(|m| m.starts_with(nu) && *m != nu).collect();
            for m in sub {
                let img_parent = &mapping[&m.parent().expect("below ν")];
                let img = t
                    .children(img_parent)
                    .into_iter()
                    .find(|d| feas.get(m, d))
                    .expect("feasibility guarantees a completion");
                mapping.insert(m.clone(), img.clone());
            }
            return (Some(TreeHom::from_map(mapping)), stats);
        }
    }
    (None, stats)
}
