use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A finite sequence of labels; the empty sequence is the root ⊥.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Node(Vec<u32>);

impl Node {
    pub fn root() -> Self {
        Node(Vec::new())
    }

    pub fn new(labels: Vec<u32>) -> Self {
        Node(labels)
    }

    pub fn labels(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Initial segment of length `m` (clamped to the node's length).
    pub fn prefix(&self, m: usize) -> Node {
        Node(self.0[..m.min(self.0.len())].to_vec())
    }

    pub fn parent(&self) -> Option<Node> {
        (!self.is_root()).then(|| self.prefix(self.level() - 1))
    }

    pub fn child(&self, label: u32) -> Node {
        let mut v = self.0.clone();
        v.push(label);
        Node(v)
    }

    pub fn starts_with(&self, other: &Node) -> bool {
        self.0.starts_with(&other.0)
    }
}

impl From<&[u32]> for Node {
    fn from(v: &[u32]) -> Self {
        Node(v.to_vec())
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            return write!(f, "⊥");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

/// Branching bound λ, depth bound D and valuation bound Vmax.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeBounds {
    pub branching: u32,
    pub depth: u32,
    pub vmax: u32,
}

/// A finite tree of label sequences with a natural-number valuation.
///
/// The representation can hold malformed trees (missing root, holes in the
/// prefix closure, partial valuations) so that [`validate_tree`] can report
/// them; every search and encoding routine assumes a validated tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "TreeRepr", into = "TreeRepr")]
pub struct ValuatedTree {
    nodes: BTreeSet<Node>,
    valuation: BTreeMap<Node, u32>,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    nodes: Vec<Node>,
    valuation: Vec<(Node, u32)>,
}

impl From<TreeRepr> for ValuatedTree {
    fn from(r: TreeRepr) -> Self {
        ValuatedTree { nodes: r.nodes.into_iter().collect(), valuation: r.valuation.into_iter().collect() }
    }
}

impl From<ValuatedTree> for TreeRepr {
    fn from(t: ValuatedTree) -> Self {
        TreeRepr { nodes: t.nodes.into_iter().collect(), valuation: t.valuation.into_iter().collect() }
    }
}

impl ValuatedTree {
    pub fn from_parts(nodes: impl IntoIterator<Item = Node>, valuation: impl IntoIterator<Item = (Node, u32)>) -> Self {
        ValuatedTree { nodes: nodes.into_iter().collect(), valuation: valuation.into_iter().collect() }
    }

    /// Tree whose node set is exactly the valued nodes.
    pub fn from_valued(pairs: impl IntoIterator<Item = (Node, u32)>) -> Self {
        let valuation: BTreeMap<Node, u32> = pairs.into_iter().collect();
        ValuatedTree { nodes: valuation.keys().cloned().collect(), valuation }
    }

    /// Shorthand for literals: `&[(&[], 0), (&[0], 1)]`.
    pub fn from_slices(pairs: &[(&[u32], u32)]) -> Self {
        Self::from_valued(pairs.iter().map(|(l, v)| (Node::from(*l), *v)))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: &Node) -> bool {
        self.nodes.contains(node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter()
    }

    /// Nodes other than the root, in lexicographic order.
    pub fn non_root(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter().filter(|n| !n.is_root())
    }

    pub fn valuation(&self, node: &Node) -> Option<u32> {
        self.valuation.get(node).copied()
    }

    pub fn valuations(&self) -> &BTreeMap<Node, u32> {
        &self.valuation
    }

    /// The level-k slice, in lexicographic order.
    pub fn level(&self, k: usize) -> Vec<&Node> {
        self.nodes.iter().filter(|n| n.level() == k).collect()
    }

    /// Nodes in level order, lexicographic within each level.
    pub fn level_order(&self) -> Vec<&Node> {
        let mut v: Vec<&Node> = self.nodes.iter().collect();
        v.sort_by(|a, b| a.level().cmp(&b.level()).then_with(|| a.cmp(b)));
        v
    }

    /// The valuation-k slice, in lexicographic order.
    pub fn with_valuation(&self, k: u32) -> Vec<&Node> {
        self.nodes.iter().filter(|n| self.valuation(n) == Some(k)).collect()
    }

    pub fn children(&self, node: &Node) -> Vec<&Node> {
        let depth = node.level() + 1;
        self.nodes.range(node.clone()..).take_while(|n| n.starts_with(node)).filter(|n| n.level() == depth).collect()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(Node::level).max().unwrap_or(0)
    }

    /// No two children of one node share a valuation.
    pub fn is_sibling_distinct(&self) -> bool {
        self.nodes.iter().all(|n| {
            let mut seen = BTreeSet::new();
            self.children(n).into_iter().all(|c| seen.insert(self.valuation(c)))
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    #[error("root ⊥ is missing")]
    MissingRoot,
    #[error("node {0} has a missing initial segment")]
    NotPrefixClosed(Node),
    #[error("node {node} uses label {label} outside the branching bound {bound}")]
    LabelOutOfRange { node: Node, label: u32, bound: u32 },
    #[error("node {node} is deeper than the depth bound {bound}")]
    TooDeep { node: Node, bound: u32 },
    #[error("node {0} has no valuation")]
    MissingValuation(Node),
    #[error("valuation {value} of {node} exceeds bound {bound}")]
    ValuationOutOfRange { node: Node, value: u32, bound: u32 },
    #[error("valuation given for {0}, which is not a node")]
    StrayValuation(Node),
}

/// Checks root presence, prefix closure, valuation totality, and (when bounds
/// are given) label, depth and valuation bounds.
pub fn validate_tree(t: &ValuatedTree, bounds: Option<&TreeBounds>) -> Result<(), TreeViolation> {
    if !t.nodes.contains(&Node::root()) {
        return Err(TreeViolation::MissingRoot);
    }
    for n in &t.nodes {
        if let Some(p) = n.parent() {
            if !t.nodes.contains(&p) {
                return Err(TreeViolation::NotPrefixClosed(n.clone()));
            }
        }
        let Some(v) = t.valuation(n) else {
            return Err(TreeViolation::MissingValuation(n.clone()));
        };
        if let Some(b) = bounds {
            if n.level() > b.depth as usize {
                return Err(TreeViolation::TooDeep { node: n.clone(), bound: b.depth });
            }
            if let Some(&label) = n.labels().iter().find(|l| **l >= b.branching) {
                return Err(TreeViolation::LabelOutOfRange { node: n.clone(), label, bound: b.branching });
            }
            if v > b.vmax {
                return Err(TreeViolation::ValuationOutOfRange { node: n.clone(), value: v, bound: b.vmax });
            }
        }
    }
    if let Some(stray) = t.valuation.keys().find(|n| !t.nodes.contains(*n)) {
        return Err(TreeViolation::StrayValuation(stray.clone()));
    }
    Ok(())
}

/// A map from the nodes of one tree to the nodes of another.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(from = "Vec<(Node, Node)>", into = "Vec<(Node, Node)>")]
pub struct TreeHom {
    mapping: BTreeMap<Node, Node>,
}

impl From<Vec<(Node, Node)>> for TreeHom {
    fn from(v: Vec<(Node, Node)>) -> Self {
        TreeHom { mapping: v.into_iter().collect() }
    }
}

impl From<TreeHom> for Vec<(Node, Node)> {
    fn from(h: TreeHom) -> Self {
        h.mapping.into_iter().collect()
    }
}

impl TreeHom {
    pub fn from_map(mapping: BTreeMap<Node, Node>) -> Self {
        TreeHom { mapping }
    }

    pub fn identity(t: &ValuatedTree) -> Self {
        TreeHom { mapping: t.nodes().map(|n| (n.clone(), n.clone())).collect() }
    }

    pub fn image(&self, node: &Node) -> Option<&Node> {
        self.mapping.get(node)
    }

    pub fn mapping(&self) -> &BTreeMap<Node, Node> {
        &self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().all(|(a, b)| a == b)
    }

    /// `self` followed by `next`: ν ↦ next(self(ν)). Nodes whose image falls
    /// outside `next`'s domain are dropped.
    pub fn then(&self, next: &TreeHom) -> TreeHom {
        let mapping = self.mapping.iter().filter_map(|(a, b)| next.image(b).map(|c| (a.clone(), c.clone()))).collect();
        TreeHom { mapping }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomViolation {
    #[error("source node {0} has no image")]
    NotTotal(Node),
    #[error("{0} is mapped but is not a source node")]
    OutsideDomain(Node),
    #[error("image {image} of {node} is not a target node")]
    ImageMissing { node: Node, image: Node },
    #[error("{node} at level {} maps to {image} at level {}", node.level(), image.level())]
    LevelChanged { node: Node, image: Node },
    #[error("initial segment of length {m} of {node} is not preserved")]
    PrefixBroken { node: Node, m: usize },
    #[error("valuation of {node} is {source_value}, image {image} has {target_value}")]
    ValuationChanged { node: Node, image: Node, source_value: u32, target_value: u32 },
}

/// Verifies the three defining conditions of a valuated homomorphism: levels
/// preserved, initial segments commute, valuations preserved. The map must be
/// total on `src` and land in `dst`.
pub fn check_tree_hom(src: &ValuatedTree, dst: &ValuatedTree, hom: &TreeHom) -> Result<(), HomViolation> {
    for n in src.nodes() {
        if !hom.mapping.contains_key(n) {
            return Err(HomViolation::NotTotal(n.clone()));
        }
    }
    for (node, image) in &hom.mapping {
        if !src.contains(node) {
            return Err(HomViolation::OutsideDomain(node.clone()));
        }
        if !dst.contains(image) {
            return Err(HomViolation::ImageMissing { node: node.clone(), image: image.clone() });
        }
        if node.level() != image.level() {
            return Err(HomViolation::LevelChanged { node: node.clone(), image: image.clone() });
        }
        for m in 0..=node.level() {
            if hom.mapping.get(&node.prefix(m)) != Some(&image.prefix(m)) {
                return Err(HomViolation::PrefixBroken { node: node.clone(), m });
            }
        }
        let (sv, tv) = (src.valuation(node), dst.valuation(image));
        if sv != tv {
            return Err(HomViolation::ValuationChanged {
                node: node.clone(),
                image: image.clone(),
                source_value: sv.unwrap_or(u32::MAX),
                target_value: tv.unwrap_or(u32::MAX),
            });
        }
    }
    Ok(())
}
