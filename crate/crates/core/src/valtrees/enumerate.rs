use std::collections::BTreeMap;

use thiserror::Error;

use super::{check_tree_hom, Node, TreeHom, ValuatedTree};

/// Default bound on the number of candidate maps the oracle will scan.
pub const DEFAULT_ORACLE_GUARD: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle infeasible: {candidates} candidate maps exceed the guard of {guard}")]
    Infeasible { candidates: u128, guard: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub homs: Vec<TreeHom>,
    pub truncated: bool,
}

/// Every valuated homomorphism `src → dst`, by brute force.
///
/// Each source node ranges over all target nodes of the same level and
/// valuation, ignoring the tree structure; every combination is checked with
/// [`check_tree_hom`]. Meant as an independent oracle for the search.
pub fn enumerate_valuated_homs(
    src: &ValuatedTree,
    dst: &ValuatedTree,
    limit: usize,
) -> Result<Enumeration, OracleError> {
    enumerate_valuated_homs_guarded(src, dst, limit, DEFAULT_ORACLE_GUARD)
}

pub fn enumerate_valuated_homs_guarded(
    src: &ValuatedTree,
    dst: &ValuatedTree,
    limit: usize,
    guard: u128,
) -> Result<Enumeration, OracleError> {
    let sources: Vec<&Node> = src.nodes().collect();
    let candidates: Vec<Vec<&Node>> = sources
        .iter()
        .map(|s| dst.nodes().filter(|d| d.level() == s.level() && dst.valuation(d) == src.valuation(s)).collect())
        .collect();
    let total = candidates.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if total > guard {
        return Err(OracleError::Infeasible { candidates: total, guard });
    }
    let mut out = Enumeration { homs: Vec::new(), truncated: false };
    if total == 0 {
        return Ok(out);
    }
    let mut odometer = vec![0usize; sources.len()];
    loop {
        let mapping: BTreeMap<Node, Node> = sources
            .iter()
            .zip(&odometer)
            .enumerate()
            .map(|(k, (s, &i))| ((*s).clone(), candidates[k][i].clone()))
            .collect();
        let hom = TreeHom::from_map(mapping);
        if check_tree_hom(src, dst, &hom).is_ok() {
            if out.homs.len() == limit {
                out.truncated = true;
                return Ok(out);
            }
            out.homs.push(hom);
        }
        let mut pos = 0;
        loop {
            if pos == odometer.len() {
                return Ok(out);
            }
            odometer[pos] += 1;
            if odometer[pos] < candidates[pos].len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}
