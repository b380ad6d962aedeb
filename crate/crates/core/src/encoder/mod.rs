//! Unfolding a tree pool into the index set S and the free module on S with
//! its distinguished submodules.

mod build;
mod index;
mod module;

use thiserror::Error;

pub use build::{build_index_set, build_module, build_module_u, build_module_u_positions, IndexSet, TreeAssignment};
pub use index::{BadWIndex, SIndex, WIndex};
pub use module::{DistModule, Provenance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("no tree assigned to prefix {0}")]
    MissingPrefix(SIndex),
    #[error("prefix {prefix} is assigned tree {tree}, which is not in the pool")]
    UnknownTree { prefix: SIndex, tree: usize },
    #[error("assignment not injective: tree {tree} is assigned to both {first} and {second}")]
    NotInjective { tree: usize, first: SIndex, second: SIndex },
    #[error("pool too small: {required} trees required, {available} available")]
    PoolTooSmall { required: usize, available: usize },
    #[error("{0} is not a basis label")]
    NotInBasis(SIndex),
    #[error("basis position {index} out of range for rank {rank}")]
    PositionOutOfRange { index: usize, rank: usize },
    #[error("module already carries a subset slot")]
    AlreadySubsetIndexed,
    #[error("slot {0} lies outside the module's bounds")]
    OutOfBounds(WIndex),
    #[error("malformed generator in slot {slot}: {reason}")]
    MalformedGenerator { slot: WIndex, reason: String },
}

#[cfg(test)]
mod tests;
