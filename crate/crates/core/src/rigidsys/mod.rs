//! Subset-indexed families of modules, and the passage to torsion-free
//! abelian groups by inverting one prime per slot.

mod lattice;
mod primes;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoder::{build_module_u_positions, DistModule, EncodeError, WIndex};
use crate::exactlin::{in_prime_hull, Field, SparseVec};
use crate::homsolver::{hom_space, HomError};

pub use lattice::IntLattice;
pub use primes::PrimeAssignment;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RigidError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("comaximality violated: prime {prime} assigned to both {first} and {second}")]
    ComaximalityViolated { prime: u64, first: WIndex, second: WIndex },
    #[error("no prime assigned to slot {0}")]
    MissingPrime(WIndex),
    #[error("divisible modules need a rational base, got {0}")]
    NotRational(Field),
    #[error("base module has no subset slot D2")]
    NotSubsetIndexed,
    #[error("modules come from different bases or prime assignments")]
    ProvenanceMismatch,
    #[error("base system not rigid: rational Hom space has dimension {dim} or a non-scalar generator")]
    BaseNotRigid { dim: usize },
}

/// One cell of the subset grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridCell {
    #[serde(rename = "U")]
    pub u: Vec<usize>,
    #[serde(rename = "V")]
    pub v: Vec<usize>,
    pub contained: bool,
    pub dim: usize,
    pub identity_generator: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridReport {
    pub module: String,
    pub cells: Vec<GridCell>,
    pub all_pass: bool,
}

fn normalize(u: &[usize]) -> Vec<usize> {
    let mut u = u.to_vec();
    u.sort_unstable();
    u.dedup();
    u
}

/// Computes `Hom(F_U, F_V)` for every ordered pair of subsets (basis
/// positions). A cell passes when the space is the scalars (dimension 1,
/// identity generator) for U ⊆ V and zero otherwise.
pub fn check_fully_rigid(base: &DistModule, subsets: &[Vec<usize>]) -> Result<GridReport, RigidError> {
    let subsets: Vec<Vec<usize>> = subsets.iter().map(|u| normalize(u)).collect();
    let modules: Vec<DistModule> =
        subsets.iter().map(|u| build_module_u_positions(base, u)).collect::<Result<_, EncodeError>>()?;
    let n = subsets.len();
    let cells: Vec<GridCell> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let h = hom_space(&modules[i], &modules[j])?;
            let contained = subsets[i].iter().all(|x| subsets[j].contains(x));
            let identity_generator = h.dim() == 1 && h.mats[0].is_identity();
            let pass = if contained { identity_generator } else { h.dim() == 0 };
            Ok(GridCell {
                u: subsets[i].clone(),
                v: subsets[j].clone(),
                contained,
                dim: h.dim(),
                identity_generator,
                verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            })
        })
        .collect::<Result<_, RigidError>>()?;
    let all_pass = cells.iter().all(|c| c.verdict == Verdict::Pass);
    Ok(GridReport { module: base.id(), cells, all_pass })
}

/// M_U = ⟨p_w^{-∞} F_w : w⟩ inside ℚ ⊗ F, given by the rational module F_U
/// and one prime per slot. Nothing infinite is materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibleModule {
    base: DistModule,
    primes: PrimeAssignment,
}

impl DivisibleModule {
    pub fn base(&self) -> &DistModule {
        &self.base
    }

    pub fn primes(&self) -> &PrimeAssignment {
        &self.primes
    }

    fn prime(&self, w: WIndex) -> u64 {
        self.primes.get(w).expect("checked at construction")
    }
}

/// Validates the base (rational, with a subset slot) and that every slot has a
/// prime; primes for slots the module does not have are dropped.
pub fn build_divisible(base: &DistModule, primes: &PrimeAssignment) -> Result<DivisibleModule, RigidError> {
    if base.field() != Field::Rational {
        return Err(RigidError::NotRational(base.field()));
    }
    if base.slot(WIndex::D2).is_none() {
        return Err(RigidError::NotSubsetIndexed);
    }
    let mut kept = Vec::new();
    for w in base.keys() {
        kept.push((w, primes.get(w).ok_or(RigidError::MissingPrime(w))?));
    }
    Ok(DivisibleModule { base: base.clone(), primes: PrimeAssignment::explicit(kept)? })
}

/// Outcome of `Hom(M_U, M_V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivisibleHom {
    /// ℤ·1: the integer multiples of the identity.
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "0")]
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QStep {
    pub dim: usize,
    /// The spanning scalar, when the rational Hom space is the scalars.
    pub generator: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub q: String,
    pub in_p0_hull: bool,
    pub in_p1_hull: bool,
    pub accepted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integrality {
    pub p0: u64,
    pub p1: u64,
    pub probes: Vec<Probe>,
    /// The admissible scalars: p0^{-∞}ℤ ∩ p1^{-∞}ℤ.
    pub accepted: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibleReport {
    pub qstep: QStep,
    pub integrality: Option<Integrality>,
    pub result: DivisibleHom,
}

/// Scalars q with q·1 preserving both p0^{-∞}F₀ and p1^{-∞}F₁ lie in
/// p0^{-∞}ℤ ∩ p1^{-∞}ℤ; a probe is accepted iff it lies in both hulls.
pub fn integrality_probe(q: &BigRational, p0: u64, p1: u64) -> Probe {
    let (a, b) = (in_prime_hull(q, p0), in_prime_hull(q, p1));
    Probe { q: format!("{}/{}", q.numer(), q.denom()), in_p0_hull: a, in_p1_hull: b, accepted: a && b }
}

/// The default probes 1/p0 and 1/p1.
pub fn default_probes(p0: u64, p1: u64) -> Vec<BigRational> {
    [p0, p1].iter().map(|&p| BigRational::new(BigInt::one(), BigInt::from(p))).collect()
}

/// `Hom(M_U, M_V)`: first the rational Hom space, then the integrality filter
/// on its scalars. A rational Hom space other than 0 or the scalars means the
/// base system is not rigid.
pub fn hom_divisible(
    mu: &DivisibleModule,
    mv: &DivisibleModule,
    probes: &[BigRational],
) -> Result<DivisibleReport, RigidError> {
    let strip = |m: &DistModule| {
        let mut slots = m.slots().clone();
        slots.remove(&WIndex::D2);
        let prov = m.provenance().cloned().map(|mut p| {
            p.subset = None;
            p
        });
        (m.basis().to_vec(), slots, prov)
    };
    if strip(&mu.base) != strip(&mv.base) || mu.primes != mv.primes {
        return Err(RigidError::ProvenanceMismatch);
    }
    let h = hom_space(&mu.base, &mv.base)?;
    if h.dim() == 0 {
        return Ok(DivisibleReport {
            qstep: QStep { dim: 0, generator: None },
            integrality: None,
            result: DivisibleHom::Zero,
        });
    }
    let scalar = match (h.dim(), h.mats[0].scalar_value()) {
        (1, Some(c)) if !c.is_zero() => c,
        _ => return Err(RigidError::BaseNotRigid { dim: h.dim() }),
    };
    let (p0, p1) = (mu.prime(WIndex::D0), mu.prime(WIndex::D1));
    let probes = probes.iter().map(|q| integrality_probe(q, p0, p1)).collect();
    Ok(DivisibleReport {
        qstep: QStep { dim: 1, generator: Some(scalar.to_artifact_string()) },
        integrality: Some(Integrality { p0, p1, probes, accepted: "Z".into() }),
        result: DivisibleHom::Integers,
    })
}

/// Decides `x ∈ Σ_w p_w^{-n} span_ℤ(F_w)`, a finite stage of M_U, by integer
/// lattice membership after clearing denominators. Monotone in `n`; the union
/// over all n is M_U itself, so `true` is conclusive and `false` only says
/// "not by stage n".
pub fn bounded_membership(x: &SparseVec, m: &DivisibleModule, n: u32) -> bool {
    let rank = m.base.rank();
    assert_eq!(x.dim(), rank, "vector has the wrong dimension");
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (w, gens) in m.base.slots() {
        let scale = BigRational::new(BigInt::one(), BigInt::from(m.prime(*w)).pow(n));
        for g in gens {
            let mut row = vec![BigRational::zero(); rank];
            for (i, v) in g.iter() {
                row[i] = v.as_rational().expect("rational base") * &scale;
            }
            rows.push(row);
        }
    }
    let mut target = vec![BigRational::zero(); rank];
    for (i, v) in x.iter() {
        target[i] = v.as_rational().expect("rational vector").clone();
    }
    let denom = rows.iter().flatten().chain(&target).fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let to_int = |r: &Vec<BigRational>| -> Vec<BigInt> {
        r.iter().map(|q| (q * BigRational::from_integer(denom.clone())).to_integer()).collect()
    };
    let lattice = IntLattice::from_rows(rank, rows.iter().map(to_int).collect());
    lattice.contains(&to_int(&target))
}

#[cfg(test)]
mod tests;
