//! Content hashes used to chain artifacts together.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// `sha256:<hex>` of the compact JSON serialization of `value`.
///
/// Every artifact type serializes deterministically (ordered maps, fixed field
/// order), so the hash depends only on content, never on file formatting.
pub fn content_hash<T: Serialize + ?Sized>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("artifact types always serialize");
    format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))
}
