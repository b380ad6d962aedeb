use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{verify_hom, HomError};
use crate::encoder::{DistModule, SIndex};
use crate::exactlin::{Matrix, Scalar};
use crate::valtrees::{check_tree_hom, HomViolation, Node, Pool, TreeHom, ValuatedTree};

/// A tree homomorphism read off a non-scalar endomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    /// Prefix whose tree is the source of `hom`.
    pub source: SIndex,
    /// Prefix whose tree is the target of `hom`.
    pub target: SIndex,
    pub source_tree: usize,
    pub target_tree: usize,
    /// The basis label and the off-diagonal support label that started the chase.
    pub trigger: (SIndex, SIndex),
    /// Whether the identity was added to φ before chasing (needed when φ acts
    /// as zero below the top stratum).
    pub shifted: bool,
    pub hom: TreeHom,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("matrix is not an endomorphism of the module: {0}")]
    NotAnEndomorphism(HomError),
    #[error("every basis vector is mapped into its own line; nothing to extract")]
    NoOffDiagonalSupport,
    #[error("invariant breach: chase from {label} cannot extend at node {node}")]
    NotExtendable { label: SIndex, node: Node },
    #[error("invariant breach: extracted map from {label} fails the tree checker: {violation}")]
    InvalidResult { label: SIndex, violation: HomViolation },
    #[error(
        "off-diagonal support lies only in the top stratum between labels with different parents; \
         no rooted chase exists"
    )]
    UnrootedFlow,
    #[error("module carries no provenance to locate its trees")]
    MissingProvenance,
    #[error("pool {found} does not match the module's pool {expected}")]
    PoolMismatch { expected: String, found: String },
    #[error("no tree assigned to prefix {0}")]
    MissingTree(SIndex),
}

impl ExtractError {
    /// Errors that contradict the constraint system itself rather than the input.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, ExtractError::NotExtendable { .. } | ExtractError::InvalidResult { .. })
    }
}

struct Ctx<'a> {
    module: &'a DistModule,
    pool: &'a Pool,
    pos: HashMap<&'a SIndex, usize>,
}

impl Ctx<'_> {
    fn tree(&self, prefix: &SIndex) -> Result<(usize, &ValuatedTree), ExtractError> {
        let p = self.module.provenance().ok_or(ExtractError::MissingProvenance)?;
        let idx = p.assignment.tree_for(prefix).ok_or_else(|| ExtractError::MissingTree(prefix.clone()))?;
        let t = self.pool.trees.get(idx).ok_or_else(|| ExtractError::MissingTree(prefix.clone()))?;
        Ok((idx, t))
    }

    fn coef<'m>(&self, phi: &'m Matrix, image: &SIndex, of: &SIndex) -> Option<&'m Scalar> {
        let (b, a) = (*self.pos.get(image)?, *self.pos.get(of)?);
        let c = phi.get(b, a);
        (!c.is_zero()).then_some(c)
    }

    /// Builds g: T_src → T_dst level by level from ⊥ ↦ ⊥. A node ν₁ goes to
    /// the least child σ of g(ν₁↾k) such that e_{dst^⟨σ⟩} occurs in
    /// e_{src^⟨ν₁⟩}φ. With `steer = (σ, σ₀)`, prefixes of σ try the matching
    /// prefix of σ₀ first.
    fn chase(
        &self,
        phi: &Matrix,
        src: &SIndex,
        dst: &SIndex,
        steer: Option<(&Node, &Node)>,
    ) -> Result<TreeHom, ExtractError> {
        let (_, ts) = self.tree(src)?;
        let (_, td) = self.tree(dst)?;
        let mut g: BTreeMap<Node, Node> = BTreeMap::new();
        g.insert(Node::root(), Node::root());
        for nu in ts.level_order().into_iter().filter(|n| !n.is_root()) {
            let parent_img = g[&nu.parent().expect("non-root")].clone();
            let column = src.extend(nu);
            let mut candidates: Vec<&Node> = td.children(&parent_img);
            if let Some((from, to)) = steer {
                if from.starts_with(nu) && to.level() >= nu.level() {
                    let want = to.prefix(nu.level());
                    if let Some(i) = candidates.iter().position(|c| **c == want) {
                        let c = candidates.remove(i);
                        candidates.insert(0, c);
                    }
                }
            }
            let sigma = candidates
                .into_iter()
                .find(|s| self.coef(phi, &dst.extend(s), &column).is_some())
                .ok_or_else(|| ExtractError::NotExtendable { label: src.clone(), node: nu.clone() })?;
            g.insert(nu.clone(), sigma.clone());
        }
        let hom = TreeHom::from_map(g);
        check_tree_hom(ts, td, &hom)
            .map_err(|violation| ExtractError::InvalidResult { label: src.clone(), violation })?;
        Ok(hom)
    }
}

/// Recovers a valuated tree homomorphism from an endomorphism φ that moves
/// some basis vector off its own line.
///
/// The trigger is the first basis label η̄ (in basis order) whose image has
/// support on some η̄₀ ≠ η̄, with η̄₀ the first such label. Below the top
/// stratum both labels carry trees and the chase runs T_η̄ → T_η̄₀. In the top
/// stratum η̄ = ρ̄^⟨σ⟩ and η̄₀ = ρ̄₀^⟨σ₀⟩ and the chase runs T_ρ̄ → T_ρ̄₀, steering
/// the path to σ toward σ₀; everything below the top stratum then acts as a
/// single scalar r, and if r = 0 the identity is added first. Pairs with
/// ρ̄ ≠ ρ̄₀ give no rooted chase and are skipped.
pub fn extract_tree_hom(module: &DistModule, pool: &Pool, phi: &Matrix) -> Result<Extraction, ExtractError> {
    verify_hom(module, module, phi).map_err(ExtractError::NotAnEndomorphism)?;
    let prov = module.provenance().ok_or(ExtractError::MissingProvenance)?;
    if prov.pool_id != pool.id() {
        return Err(ExtractError::PoolMismatch { expected: prov.pool_id.clone(), found: pool.id() });
    }
    let ctx = Ctx { module, pool, pos: module.positions() };
    let top = prov.truncation as usize;
    let basis = module.basis();
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|a| (0..basis.len()).filter(move |&b| b != a).map(move |b| (a, b)))
        .filter(|&(a, b)| !phi.get(b, a).is_zero())
        .collect();
    let Some(&(a, b)) = pairs.first() else {
        return Err(ExtractError::NoOffDiagonalSupport);
    };
    let (eta, eta0) = (&basis[a], &basis[b]);
    if eta.len() < top {
        let hom = ctx.chase(phi, eta, eta0, None)?;
        return Ok(Extraction {
            source: eta.clone(),
            target: eta0.clone(),
            source_tree: ctx.tree(eta)?.0,
            target_tree: ctx.tree(eta0)?.0,
            trigger: (eta.clone(), eta0.clone()),
            shifted: false,
            hom,
        });
    }
    for &(a, b) in &pairs {
        let (eta, eta0) = (&basis[a], &basis[b]);
        let (Some((rho, sigma)), Some((rho0, sigma0))) = (eta.split_last(), eta0.split_last()) else { continue };
        if rho != rho0 {
            continue;
        }
        let r = phi.get(ctx.pos[&rho], ctx.pos[&rho]);
        let shifted = r.is_zero();
        let work = if shifted { phi.add(&Matrix::identity(phi.field(), phi.rows())) } else { phi.clone() };
        let hom = ctx.chase(&work, &rho, &rho0, Some((sigma, sigma0)))?;
        return Ok(Extraction {
            source: rho.clone(),
            target: rho0.clone(),
            source_tree: ctx.tree(&rho)?.0,
            target_tree: ctx.tree(&rho0)?.0,
            trigger: (eta.clone(), eta0.clone()),
            shifted,
            hom,
        });
    }
    Err(ExtractError::UnrootedFlow)
}
