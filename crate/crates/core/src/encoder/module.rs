use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{EncodeError, SIndex, TreeAssignment, WIndex};
use crate::digest::content_hash;
use crate::exactlin::{Field, Scalar, ScalarText, SparseVec};

/// Where a module came from: truncation bounds, the pool, and the tree
/// assignment. `subset` is set on subset-indexed modules (basis positions).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub lambda: u32,
    pub depth: u32,
    pub truncation: u32,
    pub vmax: u32,
    pub pool_id: String,
    pub assignment: TreeAssignment,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
}

/// A free module of finite rank with a labeled basis and generator lists for
/// its distinguished submodules, keyed by slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModuleRepr", into = "ModuleRepr")]
pub struct DistModule {
    field: Field,
    basis: Vec<SIndex>,
    slots: BTreeMap<WIndex, Vec<SparseVec>>,
    provenance: Option<Provenance>,
}

impl DistModule {
    /// Checks that every generator lives in `field^rank`.
    pub fn from_parts(
        field: Field,
        basis: Vec<SIndex>,
        slots: BTreeMap<WIndex, Vec<SparseVec>>,
        provenance: Option<Provenance>,
    ) -> Result<Self, EncodeError> {
        for (w, gens) in &slots {
            for g in gens {
                if g.dim() != basis.len() || g.field() != field {
                    return Err(EncodeError::MalformedGenerator {
                        slot: *w,
                        reason: format!("expected {field}^{}", basis.len()),
                    });
                }
            }
        }
        Ok(DistModule { field, basis, slots, provenance })
    }

    /// Module of rank `rank` with placeholder labels ⟨⟨i⟩⟩ and no provenance;
    /// for experiments with arbitrary slot data.
    pub fn synthetic(field: Field, rank: usize, slots: BTreeMap<WIndex, Vec<SparseVec>>) -> Result<Self, EncodeError> {
        let basis = (0..rank as u32).map(|i| SIndex::from_slices(&[&[i]])).collect();
        Self::from_parts(field, basis, slots, None)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SIndex] {
        &self.basis
    }

    pub fn slots(&self) -> &BTreeMap<WIndex, Vec<SparseVec>> {
        &self.slots
    }

    pub fn slot(&self, w: WIndex) -> Option<&[SparseVec]> {
        self.slots.get(&w).map(Vec::as_slice)
    }

    pub fn keys(&self) -> impl Iterator<Item = WIndex> + '_ {
        self.slots.keys().copied()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn set_certified(&mut self, certified: bool) {
        if let Some(p) = self.provenance.as_mut() {
            p.certified = certified;
        }
    }

    pub fn positions(&self) -> HashMap<&SIndex, usize> {
        self.basis.iter().enumerate().map(|(i, s)| (s, i)).collect()
    }

    pub fn position(&self, label: &SIndex) -> Option<usize> {
        self.basis.iter().position(|s| s == label)
    }

    /// Content hash of the module artifact.
    pub fn id(&self) -> String {
        content_hash(self)
    }

    /// The same module over another field. Fails if a coefficient has no image.
    pub fn over(&self, field: Field) -> Result<DistModule, EncodeError> {
        let mut slots = BTreeMap::new();
        for (w, gens) in &self.slots {
            let mut out = Vec::with_capacity(gens.len());
            for g in gens {
                let mut entries = Vec::with_capacity(g.nnz());
                for (i, v) in g.iter() {
                    let q = v.as_rational().ok_or(EncodeError::MalformedGenerator {
                        slot: *w,
                        reason: "only rational modules can change field".into(),
                    })?;
                    let x = field
                        .from_rational(q)
                        .map_err(|e| EncodeError::MalformedGenerator { slot: *w, reason: e.to_string() })?;
                    entries.push((i, x));
                }
                out.push(SparseVec::new(field, self.rank(), entries).expect("indices in range"));
            }
            slots.insert(*w, out);
        }
        Ok(DistModule { field, basis: self.basis.clone(), slots, provenance: self.provenance.clone() })
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleRepr {
    field: Field,
    basis: Vec<SIndex>,
    submodules: Vec<SlotRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
struct SlotRepr {
    w: WIndex,
    gens: Vec<Vec<(usize, ScalarText)>>,
}

impl From<DistModule> for ModuleRepr {
    fn from(m: DistModule) -> Self {
        let submodules = m
            .slots
            .iter()
            .map(|(w, gens)| SlotRepr {
                w: *w,
                gens: gens.iter().map(|g| g.iter().map(|(i, v)| (i, v.to_text())).collect()).collect(),
            })
            .collect();
        ModuleRepr { field: m.field, basis: m.basis, submodules, provenance: m.provenance }
    }
}

impl TryFrom<ModuleRepr> for DistModule {
    type Error = String;

    fn try_from(r: ModuleRepr) -> Result<Self, String> {
        let rank = r.basis.len();
        let mut slots = BTreeMap::new();
        for slot in r.submodules {
            let mut gens = Vec::with_capacity(slot.gens.len());
            for g in slot.gens {
                let entries = g
                    .iter()
                    .map(|(i, t)| Scalar::from_text(r.field, t).map(|v| (*i, v)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| format!("slot {}: {e}", slot.w))?;
                gens.push(SparseVec::new(r.field, rank, entries).map_err(|e| format!("slot {}: {e}", slot.w))?);
            }
            if slots.insert(slot.w, gens).is_some() {
                return Err(format!("slot {} listed twice", slot.w));
            }
        }
        DistModule::from_parts(r.field, r.basis, slots, r.provenance).map_err(|e| e.to_string())
    }
}
