use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::valtrees::Node;

/// A basis label ⟨ν⁰,…,νⁿ⁻¹⟩: a sequence of non-root nodes, each taken from
/// the tree assigned to the preceding prefix. The empty sequence is ⊥.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SIndex(Vec<Node>);

impl SIndex {
    pub fn root() -> Self {
        SIndex(Vec::new())
    }

    pub fn new(parts: Vec<Node>) -> Self {
        SIndex(parts)
    }

    /// Shorthand for literals: `&[&[0], &[0, 1]]`.
    pub fn from_slices(parts: &[&[u32]]) -> Self {
        SIndex(parts.iter().map(|p| Node::from(*p)).collect())
    }

    pub fn parts(&self) -> &[Node] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// η̄^⟨ν⟩, with η̄^⟨⊥⟩ = η̄.
    pub fn extend(&self, nu: &Node) -> SIndex {
        let mut parts = self.0.clone();
        if !nu.is_root() {
            parts.push(nu.clone());
        }
        SIndex(parts)
    }

    pub fn prefix(&self, n: usize) -> SIndex {
        SIndex(self.0[..n.min(self.0.len())].to_vec())
    }

    /// The prefix η̄ and last node ν with self = η̄^⟨ν⟩.
    pub fn split_last(&self) -> Option<(SIndex, &Node)> {
        self.0.split_last().map(|(last, rest)| (SIndex(rest.to_vec()), last))
    }

    pub fn starts_with(&self, other: &SIndex) -> bool {
        self.0.starts_with(&other.0)
    }
}

impl fmt::Display for SIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            return write!(f, "⊥");
        }
        let parts: Vec<String> = self.0.iter().map(Node::to_string).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

/// Slot names for distinguished submodules. The derived order is the order of
/// slots in every artifact: D0, D1, D2, then L1, L2, L3 blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WIndex {
    /// Span of e_⊥ − e_η̄.
    D0,
    /// Span of e_⊥.
    D1,
    /// The subset slot F_U, present only in subset-indexed modules.
    D2,
    /// Differences along tree edges from level k−1 to level k, stratum n.
    L1 { n: u32, k: u32 },
    /// Level-k nodes of the trees at stratum n.
    L2 { n: u32, k: u32 },
    /// Valuation-k nodes of the trees at stratum n.
    L3 { k: u32, n: u32 },
}

impl fmt::Display for WIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WIndex::D0 => write!(f, "D0"),
            WIndex::D1 => write!(f, "D1"),
            WIndex::D2 => write!(f, "D2"),
            WIndex::L1 { n, k } => write!(f, "L1({n},{k})"),
            WIndex::L2 { n, k } => write!(f, "L2({n},{k})"),
            WIndex::L3 { k, n } => write!(f, "L3({k},{n})"),
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("malformed slot name `{0}`")]
pub struct BadWIndex(pub String);

impl FromStr for WIndex {
    type Err = BadWIndex;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadWIndex(s.to_string());
        match s {
            "D0" => return Ok(WIndex::D0),
            "D1" => return Ok(WIndex::D1),
            "D2" => return Ok(WIndex::D2),
            _ => {}
        }
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let a: u32 = a.parse().map_err(|_| bad())?;
        let b: u32 = b.parse().map_err(|_| bad())?;
        match &s[..open] {
            "L1" => Ok(WIndex::L1 { n: a, k: b }),
            "L2" => Ok(WIndex::L2 { n: a, k: b }),
            "L3" => Ok(WIndex::L3 { k: a, n: b }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for WIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
