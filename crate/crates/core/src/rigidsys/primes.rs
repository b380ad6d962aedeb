use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RigidError;
use crate::encoder::WIndex;
use crate::exactlin::is_prime;

/// Distinct primes attached to slots. Distinct primes of ℤ are pairwise
/// comaximal, which is all the integrality argument uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(WIndex, u64)>", into = "Vec<(WIndex, u64)>")]
pub struct PrimeAssignment {
    map: BTreeMap<WIndex, u64>,
}

impl TryFrom<Vec<(WIndex, u64)>> for PrimeAssignment {
    type Error = RigidError;

    fn try_from(v: Vec<(WIndex, u64)>) -> Result<Self, RigidError> {
        PrimeAssignment::explicit(v)
    }
}

impl From<PrimeAssignment> for Vec<(WIndex, u64)> {
    fn from(p: PrimeAssignment) -> Self {
        p.map.into_iter().collect()
    }
}

/// The first primes, in order, skipping those in `taken`.
fn next_primes(taken: &[u64], count: usize) -> Vec<u64> {
    (2u64..).filter(|&n| is_prime(n) && !taken.contains(&n)).take(count).collect()
}

impl PrimeAssignment {
    /// Checks primality and injectivity.
    pub fn explicit(pairs: impl IntoIterator<Item = (WIndex, u64)>) -> Result<Self, RigidError> {
        let mut map = BTreeMap::new();
        let mut owner: BTreeMap<u64, WIndex> = BTreeMap::new();
        for (w, p) in pairs {
            if !is_prime(p) {
                return Err(RigidError::NotPrime(p));
            }
            if let Some(first) = owner.get(&p) {
                if *first != w {
                    return Err(RigidError::ComaximalityViolated { prime: p, first: *first, second: w });
                }
            }
            if let Some(old) = map.insert(w, p) {
                owner.remove(&old);
            }
            owner.insert(p, w);
        }
        Ok(PrimeAssignment { map })
    }

    /// Assigns `list[i]` to the i-th slot of `slots` (taken in slot order);
    /// slots beyond the list receive the smallest primes not yet used.
    pub fn from_list(slots: impl IntoIterator<Item = WIndex>, list: &[u64]) -> Result<Self, RigidError> {
        let mut slots: Vec<WIndex> = slots.into_iter().collect();
        slots.sort();
        slots.dedup();
        let mut primes: Vec<u64> = list.iter().copied().take(slots.len()).collect();
        if primes.len() < slots.len() {
            let extra = next_primes(&primes, slots.len() - primes.len());
            primes.extend(extra);
        }
        Self::explicit(slots.into_iter().zip(primes))
    }

    /// 2, 3, 5, 7, … in slot order.
    pub fn default_for(slots: impl IntoIterator<Item = WIndex>) -> Self {
        Self::from_list(slots, &[]).expect("consecutive primes are distinct")
    }

    pub fn get(&self, w: WIndex) -> Option<u64> {
        self.map.get(&w).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (WIndex, u64)> + '_ {
        self.map.iter().map(|(w, p)| (*w, *p))
    }

    /// The same assignment with the primes of two slots exchanged.
    pub fn swapped(&self, a: WIndex, b: WIndex) -> Self {
        let mut map = self.map.clone();
        if let (Some(pa), Some(pb)) = (self.get(a), self.get(b)) {
            map.insert(a, pb);
            map.insert(b, pa);
        }
        PrimeAssignment { map }
    }
}
