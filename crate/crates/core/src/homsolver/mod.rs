//! Hom and End spaces of modules with distinguished submodules, solved as
//! exact homogeneous linear systems.
//!
//! A map φ is stored as a `rank(dst) × rank(src)` matrix whose column `a` is
//! the image of `e_a`. The unknown for entry `(b, a)` has index
//! `b · rank(src) + a`, matching [`Matrix::to_vector`].

mod brute;
mod extract;
mod verdict;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoder::{DistModule, WIndex};
use crate::exactlin::{nullspace_of, rref, Field, Matrix, Scalar, SparseVec, SubspaceBasis};

pub use brute::{
    brute_force_hom_space, brute_force_hom_space_guarded, brute_force_scan, BruteStats, DEFAULT_BRUTE_GUARD,
};
pub use extract::{extract_tree_hom, ExtractError, Extraction};
pub use verdict::{is_scalar_only, ScalarVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("modules are over different fields ({src} and {dst})")]
    FieldMismatch { src: Field, dst: Field },
    #[error("slot sets differ: only in source {only_src:?}, only in target {only_dst:?}")]
    KeyMismatch { only_src: Vec<String>, only_dst: Vec<String> },
    #[error("matrix is {found_rows}×{found_cols}, expected {rows}×{cols}")]
    ShapeMismatch { rows: usize, cols: usize, found_rows: usize, found_cols: usize },
    #[error("generator {generator} of slot {slot} is not carried into the target slot")]
    ConstraintViolated { slot: WIndex, generator: usize },
    #[error("not an endomorphism space: source and target differ")]
    NotEndomorphismSpace,
    #[error("brute force needs a prime field, got {0}")]
    NotPrimeField(Field),
    #[error("brute force infeasible: {size} matrices exceed the guard of {guard}")]
    GuardExceeded { size: u128, guard: u128 },
}

/// A basis of the space of maps `src → dst` carrying every slot of `src` into
/// the same slot of `dst`. The basis is the reduced row-echelon basis of the
/// flattened matrices, so it is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBasis {
    pub field: Field,
    pub src_rank: usize,
    pub dst_rank: usize,
    pub src_id: String,
    pub dst_id: String,
    pub mats: Vec<Matrix>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.mats.len()
    }

    pub fn is_endomorphism_space(&self) -> bool {
        self.src_id == self.dst_id
    }

    /// The basis as a subspace of `field^(dst_rank·src_rank)`.
    pub fn as_subspace(&self) -> SubspaceBasis {
        let rows: Vec<SparseVec> = self.mats.iter().map(Matrix::to_vector).collect();
        rref(self.field, self.src_rank * self.dst_rank, &rows).expect("uniform dimension")
    }

    fn from_solution(src: &DistModule, dst: &DistModule, solution: &SubspaceBasis) -> Self {
        let mats = solution.rows().iter().map(|v| Matrix::from_vector(v, dst.rank(), src.rank())).collect();
        HomBasis {
            field: src.field(),
            src_rank: src.rank(),
            dst_rank: dst.rank(),
            src_id: src.id(),
            dst_id: dst.id(),
            mats,
        }
    }
}

/// Summary written to reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSummary {
    pub dim: usize,
    pub constraints: usize,
    pub unknowns: usize,
}

pub(crate) fn check_compatible(src: &DistModule, dst: &DistModule) -> Result<(), HomError> {
    if src.field() != dst.field() {
        return Err(HomError::FieldMismatch { src: src.field(), dst: dst.field() });
    }
    let a: BTreeSet<WIndex> = src.keys().collect();
    let b: BTreeSet<WIndex> = dst.keys().collect();
    if a != b {
        return Err(HomError::KeyMismatch {
            only_src: a.difference(&b).map(WIndex::to_string).collect(),
            only_dst: b.difference(&a).map(WIndex::to_string).collect(),
        });
    }
    Ok(())
}

/// Linear conditions on the entries of φ expressing `X_w φ ⊆ Y_w` for every
/// slot `w`.
///
/// Each target slot is reduced once. For a generator `g` of `X_w`, `gφ` lies in
/// `span(Y_w)` iff its residual vanishes on every non-pivot column `c`:
/// `(gφ)_c − Σ_p R_p[c] (gφ)_p = 0`, one equation per `c`.
pub fn hom_constraints(src: &DistModule, dst: &DistModule) -> Result<Vec<SparseVec>, HomError> {
    check_compatible(src, dst)?;
    let field = src.field();
    let (n_src, n_dst) = (src.rank(), dst.rank());
    let unknowns = n_src * n_dst;
    let minus_one = field.from_i64(-1);
    let mut out = Vec::new();
    for (w, gens) in src.slots() {
        if gens.is_empty() {
            continue;
        }
        let target =
            rref(field, n_dst, dst.slot(*w).expect("checked keys")).expect("module generators are well formed");
        let cols = target.column_index();
        let pivots = target.pivots();
        for c in target.free_columns() {
            let through: Vec<(usize, Scalar)> = cols
                .get(&c)
                .map(|hits| hits.iter().map(|(r, v)| (pivots[*r], &minus_one * v)).collect())
                .unwrap_or_default();
            for g in gens {
                let mut entries = Vec::with_capacity(g.nnz() * (1 + through.len()));
                for (a, ga) in g.iter() {
                    entries.push((c * n_src + a, ga.clone()));
                    for (p, coef) in &through {
                        entries.push((p * n_src + a, ga * coef));
                    }
                }
                let eq = SparseVec::new(field, unknowns, entries).expect("indices in range");
                if !eq.is_zero() {
                    out.push(eq);
                }
            }
        }
    }
    Ok(out)
}

/// Basis of `Hom(src, dst)`.
pub fn hom_space(src: &DistModule, dst: &DistModule) -> Result<HomBasis, HomError> {
    Ok(hom_space_with_summary(src, dst)?.0)
}

pub fn hom_space_with_summary(src: &DistModule, dst: &DistModule) -> Result<(HomBasis, HomSummary), HomError> {
    let mut constraints = hom_constraints(src, dst)?;
    // Sparse rows first keeps fill-in low; the reduced form does not depend on
    // the order.
    constraints.sort_by_key(SparseVec::nnz);
    let unknowns = src.rank() * dst.rank();
    let system = rref(src.field(), unknowns, &constraints).expect("uniform dimension");
    let solution = nullspace_of(&system);
    let basis = HomBasis::from_solution(src, dst, &solution);
    let summary = HomSummary { dim: basis.dim(), constraints: constraints.len(), unknowns };
    Ok((basis, summary))
}

/// Basis of `End(x)`.
pub fn end_space(x: &DistModule) -> Result<HomBasis, HomError> {
    hom_space(x, x)
}

/// Reduced bases of the target slots, for repeated membership checks.
pub(crate) struct SlotChecker {
    slots: Vec<(WIndex, SubspaceBasis)>,
}

impl SlotChecker {
    pub(crate) fn new(dst: &DistModule) -> Self {
        let slots = dst
            .slots()
            .iter()
            .map(|(w, gens)| (*w, rref(dst.field(), dst.rank(), gens).expect("well formed")))
            .collect();
        SlotChecker { slots }
    }

    pub(crate) fn check(&self, src: &DistModule, phi: &Matrix) -> Result<(), HomError> {
        for (w, target) in &self.slots {
            for (i, g) in src.slot(*w).unwrap_or(&[]).iter().enumerate() {
                if !target.contains(&phi.apply(g)) {
                    return Err(HomError::ConstraintViolated { slot: *w, generator: i });
                }
            }
        }
        Ok(())
    }
}

/// Checks `X_w φ ⊆ Y_w` generator by generator.
pub fn verify_hom(src: &DistModule, dst: &DistModule, phi: &Matrix) -> Result<(), HomError> {
    check_compatible(src, dst)?;
    if (phi.rows(), phi.cols()) != (dst.rank(), src.rank()) || phi.field() != src.field() {
        return Err(HomError::ShapeMismatch {
            rows: dst.rank(),
            cols: src.rank(),
            found_rows: phi.rows(),
            found_cols: phi.cols(),
        });
    }
    SlotChecker::new(dst).check(src, phi)
}
