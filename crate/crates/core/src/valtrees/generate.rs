use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::search::find_valuated_hom;
use super::{Node, Pool, ValuatedTree};

/// Parameters for [`generate_pool`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub lambda: u32,
    pub depth: u32,
    pub vmax: u32,
    pub count: usize,
    pub seed: u64,
    /// Candidate trees drawn before giving up.
    pub retry_budget: u64,
}

impl GenParams {
    pub fn new(lambda: u32, depth: u32, vmax: u32, count: usize, seed: u64) -> Self {
        let retry_budget = (200 * count as u64).max(2_000);
        GenParams { lambda, depth, vmax, count, seed, retry_budget }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenStats {
    pub attempts: u64,
    pub accepted: usize,
    pub rejected_duplicate: u64,
    pub rejected_hom: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error(
        "pool generation exhausted after {} attempts: accepted {} of {requested} trees ({} duplicates, {} with homomorphisms)",
        stats.attempts, stats.accepted, stats.rejected_duplicate, stats.rejected_hom
    )]
    Exhausted { requested: usize, stats: GenStats },
}

/// Draws one random tree. Each potential child is kept with probability 1/2.
/// With `sibling_distinct`, the children of a node receive pairwise distinct
/// valuations, and a node stops growing children once the values run out.
pub fn random_tree<R: Rng>(rng: &mut R, lambda: u32, depth: u32, vmax: u32, sibling_distinct: bool) -> ValuatedTree {
    let mut pairs = vec![(Node::root(), rng.gen_range(0..=vmax))];
    let mut frontier = vec![Node::root()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for parent in &frontier {
            let mut free: Vec<u32> = (0..=vmax).collect();
            free.shuffle(rng);
            for label in 0..lambda {
                if !rng.gen_bool(0.5) {
                    continue;
                }
                let v = if sibling_distinct {
                    match free.pop() {
                        Some(v) => v,
                        None => break,
                    }
                } else {
                    rng.gen_range(0..=vmax)
                };
                let child = parent.child(label);
                pairs.push((child.clone(), v));
                next.push(child);
            }
        }
        frontier = next;
    }
    ValuatedTree::from_valued(pairs)
}

/// Seeded rejection sampling of a pool whose trees admit no valuated
/// homomorphism between distinct members and have sibling-distinct valuations
/// (which rules out non-identity self-homs). The output still has to be
/// certified; the generator is only a heuristic for finding such pools.
///
/// All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn generate_pool(params: &GenParams) -> Result<Pool, GenError> {
    let GenParams { lambda, depth, vmax, count, seed, retry_budget } = *params;
    if count == 0 {
        return Err(GenError::InvalidParams("count must be at least 1".into()));
    }
    if lambda < 2 {
        return Err(GenError::InvalidParams(format!("branching bound λ = {lambda} must be at least 2")));
    }
    if depth < 1 {
        return Err(GenError::InvalidParams("depth bound must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees: Vec<ValuatedTree> = Vec::with_capacity(count);
    let mut stats = GenStats::default();
    while trees.len() < count {
        if stats.attempts >= retry_budget {
            stats.accepted = trees.len();
            return Err(GenError::Exhausted { requested: count, stats });
        }
        stats.attempts += 1;
        let t = random_tree(&mut rng, lambda, depth, vmax, true);
        if trees.contains(&t) {
            stats.rejected_duplicate += 1;
            continue;
        }
        if trees.iter().any(|s| find_valuated_hom(&t, s).is_some() || find_valuated_hom(s, &t).is_some()) {
            stats.rejected_hom += 1;
            continue;
        }
        trees.push(t);
    }
    Ok(Pool { lambda, depth, vmax, seed, trees })
}
