use super::{HomBasis, HomError};
use crate::exactlin::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarVerdict {
    pub scalar_only: bool,
    /// A basis element that is not a multiple of the identity, when one exists.
    pub witness: Option<Matrix>,
}

/// Decides whether an endomorphism space is exactly the scalars.
pub fn is_scalar_only(h: &HomBasis) -> Result<ScalarVerdict, HomError> {
    if !h.is_endomorphism_space() || h.src_rank != h.dst_rank {
        return Err(HomError::NotEndomorphismSpace);
    }
    let witness = h.mats.iter().find(|m| m.scalar_value().is_none()).cloned();
    let scalar_only = h.dim() == 1 && witness.is_none() && !h.mats[0].is_zero();
    Ok(ScalarVerdict { scalar_only, witness })
}
