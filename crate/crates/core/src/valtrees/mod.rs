//! Finite valuated trees, valuated homomorphisms between them, and certified
//! rigid pools.

mod certify;
mod enumerate;
mod generate;
mod search;
mod tree;

use serde::{Deserialize, Serialize};

use crate::digest::content_hash;

pub use certify::{certify_pool, CertifyError, PairVerdict, RigidityCertificate, Verdict};
pub use enumerate::{
    enumerate_valuated_homs, enumerate_valuated_homs_guarded, Enumeration, OracleError, DEFAULT_ORACLE_GUARD,
};
pub use generate::{generate_pool, random_tree, GenError, GenParams, GenStats};
pub use search::{
    find_non_identity_self_hom, find_non_identity_self_hom_with_stats, find_valuated_hom, find_valuated_hom_with_stats,
    SearchStats,
};
pub use tree::{check_tree_hom, validate_tree, HomViolation, Node, TreeBounds, TreeHom, TreeViolation, ValuatedTree};

/// An ordered family of trees sharing one set of bounds. Serialized as
/// `trees.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pool {
    pub lambda: u32,
    pub depth: u32,
    pub vmax: u32,
    pub trees: Vec<ValuatedTree>,
    pub seed: u64,
}

impl Pool {
    pub fn bounds(&self) -> TreeBounds {
        TreeBounds { branching: self.lambda, depth: self.depth, vmax: self.vmax }
    }

    /// Content hash identifying the pool in downstream provenance.
    pub fn id(&self) -> String {
        content_hash(self)
    }
}
