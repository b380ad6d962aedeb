//! The commands as library functions: each takes parsed inputs and returns the
//! artifact or report it would write.

use std::path::Path;

use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::artifacts::{
    matrix_from_text, matrix_to_text, write_json, ArtifactError, DivisibleCell, DivisibleReport, EndReport, EndoFile,
    ExtractionOutcome, HomBasisFile, HomReport,
};
use crate::config::{ConfigError, RunConfig};
use crate::encoder::{build_index_set, build_module, DistModule, EncodeError, TreeAssignment, WIndex};
use crate::exactlin::{Field, LinAlgError, Matrix};
use crate::homsolver::{extract_tree_hom, hom_space_with_summary, is_scalar_only, ExtractError, HomBasis, HomError};
use crate::rigidsys::{
    build_divisible, check_fully_rigid, default_probes, hom_divisible, DivisibleHom, GridReport, PrimeAssignment,
    RigidError, Verdict,
};
use crate::valtrees::{certify_pool, generate_pool, CertifyError, GenError, Pool, RigidityCertificate};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Generation(#[from] GenError),
    #[error(
        "generated pool failed certification (rigid={rigid}, strong={strong}, sibling_distinct={sibling_distinct})"
    )]
    GeneratedNotAdmissible { rigid: bool, strong: bool, sibling_distinct: bool },
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("pool is not certified (rigid={rigid}, strong={strong}, sibling_distinct={sibling_distinct}); pass --allow-uncertified for negative controls")]
    Uncertified { rigid: bool, strong: bool, sibling_distinct: bool },
    #[error("module was built from an uncertified pool or assignment; pass --allow-uncertified for negative controls")]
    UncertifiedModule,
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Rigid(#[from] RigidError),
    #[error("provenance mismatch: {0}")]
    Provenance(String),
    #[error(transparent)]
    Artifact(#[from] ArtifactError),
    #[error("bad matrix: {0}")]
    Matrix(#[from] LinAlgError),
    #[error(transparent)]
    Breach(ExtractError),
}

impl PipelineError {
    /// 1 for usage and validation, 2 for generation failure, 3 for an
    /// invariant breach.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Generation(GenError::Exhausted { .. }) | PipelineError::GeneratedNotAdmissible { .. } => 2,
            PipelineError::Breach(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;

/// Generates and certifies a pool.
pub fn gen_trees(cfg: &RunConfig) -> Result<(Pool, RigidityCertificate)> {
    cfg.validate()?;
    let pool = generate_pool(&cfg.gen_params())?;
    let cert = certify_pool(&pool)?;
    if !cert.admissible {
        return Err(PipelineError::GeneratedNotAdmissible {
            rigid: cert.rigid,
            strong: cert.strong,
            sibling_distinct: cert.sibling_distinct,
        });
    }
    Ok((pool, cert))
}

/// Encodes a pool. The certificate is recomputed here rather than trusted
/// from disk. Without `allow_uncertified`, the pool must be admissible and the
/// assignment injective.
pub fn encode(
    pool: &Pool,
    cfg: &RunConfig,
    assignment: Option<TreeAssignment>,
    allow_uncertified: bool,
) -> Result<DistModule> {
    cfg.validate()?;
    let cert = certify_pool(pool)?;
    if !cert.admissible && !allow_uncertified {
        return Err(PipelineError::Uncertified {
            rigid: cert.rigid,
            strong: cert.strong,
            sibling_distinct: cert.sibling_distinct,
        });
    }
    let assignment = match assignment {
        Some(a) => a,
        None => TreeAssignment::sequential(pool, cfg.truncation)?,
    };
    let injective = build_index_set(pool, &assignment, cfg.truncation, false).is_ok();
    let set = build_index_set(pool, &assignment, cfg.truncation, allow_uncertified)?;
    let mut module = build_module(pool, &set, &assignment, cfg.field)?;
    module.set_certified(cert.admissible && injective);
    Ok(module)
}

fn certified(m: &DistModule) -> bool {
    m.provenance().is_some_and(|p| p.certified)
}

fn require_certified(m: &DistModule, allow_uncertified: bool) -> Result<()> {
    if certified(m) || allow_uncertified {
        Ok(())
    } else {
        Err(PipelineError::UncertifiedModule)
    }
}

fn check_pool(module: &DistModule, pool: &Pool) -> Result<()> {
    let expected = module.provenance().map(|p| p.pool_id.clone()).unwrap_or_default();
    if expected != pool.id() {
        return Err(PipelineError::Provenance(format!(
            "module was built from pool {expected}, trees file is {}",
            pool.id()
        )));
    }
    Ok(())
}

/// Runs extraction, turning an invariant breach into an error and any other
/// failure into a recorded outcome.
pub fn extract(module: &DistModule, pool: &Pool, phi: &Matrix) -> Result<ExtractionOutcome> {
    match extract_tree_hom(module, pool, phi) {
        Ok(x) => Ok(ExtractionOutcome { extraction: Some(x), verified: true, error: None }),
        Err(e) if e.is_invariant_breach() => Err(PipelineError::Breach(e)),
        Err(e) => Ok(ExtractionOutcome { extraction: None, verified: false, error: Some(e.to_string()) }),
    }
}

/// Extraction over the witness first and then the remaining non-scalar basis
/// matrices; the first success wins.
fn extract_any(module: &DistModule, pool: &Pool, witness: &Matrix, e: &HomBasis) -> Result<ExtractionOutcome> {
    let mut last = extract(module, pool, witness)?;
    if last.verified {
        return Ok(last);
    }
    for m in e.mats.iter().filter(|m| m.scalar_value().is_none() && *m != witness) {
        last = extract(module, pool, m)?;
        if last.verified {
            break;
        }
    }
    Ok(last)
}

/// `End(module)`. On a certified module a non-scalar answer is a theorem
/// mismatch; see [`end_matches`].
pub fn end_report(
    module: &DistModule,
    pool: Option<&Pool>,
    extract: bool,
    allow_uncertified: bool,
) -> Result<(EndReport, HomBasis)> {
    require_certified(module, allow_uncertified)?;
    if let Some(p) = pool {
        check_pool(module, p)?;
    }
    let (e, summary) = hom_space_with_summary(module, module)?;
    let verdict = is_scalar_only(&e)?;
    let extraction = match (&verdict.witness, extract) {
        (Some(w), true) => {
            let pool = pool.ok_or_else(|| PipelineError::Provenance("extraction needs the trees file".into()))?;
            Some(extract_any(module, pool, w, &e)?)
        }
        _ => None,
    };
    let report = EndReport {
        module: module.id(),
        certified: certified(module),
        rank: module.rank(),
        dim: e.dim(),
        scalar_only: verdict.scalar_only,
        constraints: summary.constraints,
        witness: verdict.witness.as_ref().map(matrix_to_text),
        extraction,
    };
    Ok((report, e))
}

/// Exit status agreement: a certified module must have scalar End.
pub fn end_matches(r: &EndReport) -> bool {
    !r.certified || r.scalar_only
}

pub fn hom_basis_file(h: &HomBasis) -> HomBasisFile {
    HomBasisFile {
        source: h.src_id.clone(),
        target: h.dst_id.clone(),
        matrices: h.mats.iter().map(matrix_to_text).collect(),
    }
}

pub fn endo_file(module: &DistModule, m: &Matrix) -> EndoFile {
    EndoFile { module: module.id(), matrix: matrix_to_text(m) }
}

/// The two modules stripped of their subset slots, if both are subset
/// variants of one base.
fn common_base_subsets(a: &DistModule, b: &DistModule) -> Option<(Vec<usize>, Vec<usize>)> {
    let (pa, pb) = (a.provenance()?, b.provenance()?);
    let (ua, ub) = (pa.subset.clone()?, pb.subset.clone()?);
    let (mut qa, mut qb) = (pa.clone(), pb.clone());
    qa.subset = None;
    qb.subset = None;
    let strip = |m: &DistModule| {
        let mut s = m.slots().clone();
        s.remove(&WIndex::D2);
        s
    };
    (qa == qb && a.basis() == b.basis() && strip(a) == strip(b)).then_some((ua, ub))
}

fn contained(u: &[usize], v: &[usize]) -> bool {
    u.iter().all(|x| v.contains(x))
}

/// `Hom(src, dst)`, with the expected subset pattern when it applies.
pub fn hom_report(src: &DistModule, dst: &DistModule, allow_uncertified: bool) -> Result<(HomReport, HomBasis)> {
    require_certified(src, allow_uncertified)?;
    require_certified(dst, allow_uncertified)?;
    let (h, _) = hom_space_with_summary(src, dst)?;
    let identity_generator = h.dim() == 1 && h.mats[0].is_identity();
    let expected_dim = common_base_subsets(src, dst).map(|(u, v)| usize::from(contained(&u, &v)));
    let verdict = expected_dim.map(|d| {
        let ok = h.dim() == d && (d == 0 || identity_generator);
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    });
    let report =
        HomReport { source: src.id(), target: dst.id(), dim: h.dim(), identity_generator, expected_dim, verdict };
    Ok((report, h))
}

pub fn fully_rigid(module: &DistModule, subsets: &[Vec<usize>], allow_uncertified: bool) -> Result<GridReport> {
    require_certified(module, allow_uncertified)?;
    Ok(check_fully_rigid(module, subsets)?)
}

/// Primes in slot order over every slot of the subset-indexed modules.
pub fn prime_assignment(module: &DistModule, primes: &[u64]) -> Result<PrimeAssignment> {
    Ok(PrimeAssignment::from_list(module.keys().chain([WIndex::D2]), primes)?)
}

/// `Hom(M_U, M_V)` for every ordered pair of subsets. Probes default to
/// 1/p0 and 1/p1.
pub fn divisible(
    module: &DistModule,
    subsets: &[Vec<usize>],
    primes: &[u64],
    probes: Option<&[BigRational]>,
    allow_uncertified: bool,
) -> Result<DivisibleReport> {
    require_certified(module, allow_uncertified)?;
    if module.field() != Field::Rational {
        return Err(RigidError::NotRational(module.field()).into());
    }
    let assignment = prime_assignment(module, primes)?;
    let p0 = assignment.get(WIndex::D0).expect("every module has D0");
    let p1 = assignment.get(WIndex::D1).expect("every module has D1");
    let probes: Vec<BigRational> = probes.map(<[_]>::to_vec).unwrap_or_else(|| default_probes(p0, p1));
    let mods = subsets
        .iter()
        .map(|u| {
            let mut u = u.clone();
            u.sort_unstable();
            u.dedup();
            let m = crate::encoder::build_module_u_positions(module, &u)?;
            Ok((u, build_divisible(&m, &assignment)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = mods.len();
    let cells = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let ((u, mu), (v, mv)) = (&mods[k / n], &mods[k % n]);
            let r = hom_divisible(mu, mv, &probes)?;
            let expected = if contained(u, v) { DivisibleHom::Integers } else { DivisibleHom::Zero };
            Ok(DivisibleCell {
                u: u.clone(),
                v: v.clone(),
                verdict: if r.result == expected { Verdict::Pass } else { Verdict::Fail },
                qstep: r.qstep,
                integrality: r.integrality,
                result: r.result,
                expected,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_pass = cells.iter().all(|c| c.verdict == Verdict::Pass);
    Ok(DivisibleReport {
        module: module.id(),
        primes: assignment.iter().map(|(w, p)| (w.to_string(), p)).collect(),
        cells,
        all_pass,
    })
}

/// Extraction on a stored endomorphism.
pub fn extract_hom(module: &DistModule, pool: &Pool, endo: &EndoFile) -> Result<ExtractionOutcome> {
    if endo.module != module.id() {
        return Err(PipelineError::Provenance(format!(
            "matrix belongs to module {}, not {}",
            endo.module,
            module.id()
        )));
    }
    check_pool(module, pool)?;
    let phi = matrix_from_text(module.field(), &endo.matrix)?;
    extract(module, pool, &phi)
}

/// The subsets used by a full run: ∅, {0}, {1}, {0,1}.
pub fn default_subsets() -> Vec<Vec<usize>> {
    vec![vec![], vec![0], vec![1], vec![0, 1]]
}

/// Verdict summary of a full run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub rank: usize,
    pub end_dim: usize,
    pub grid_pass: bool,
    pub divisible_pass: bool,
}

/// gen-trees, encode, end, fully-rigid and divisible in sequence, writing every
/// artifact under `out`.
pub fn run_all(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let (pool, cert) = gen_trees(cfg)?;
    write_json(&out.join("trees.json"), &pool)?;
    write_json(&out.join("certificate.json"), &cert)?;
    let module = encode(&pool, cfg, None, false)?;
    write_json(&out.join("module.json"), &module)?;
    let (end, basis) = end_report(&module, Some(&pool), true, false)?;
    write_json(&out.join("end-report.json"), &end)?;
    write_json(&out.join("hombasis.json"), &hom_basis_file(&basis))?;
    let subsets = default_subsets();
    let grid = fully_rigid(&module, &subsets, false)?;
    write_json(&out.join("grid-report.json"), &grid)?;
    let div = if module.field() == Field::Rational {
        let d = divisible(&module, &subsets, &cfg.primes, None, false)?;
        write_json(&out.join("divisible-report.json"), &d)?;
        d.all_pass
    } else {
        true
    };
    Ok(RunSummary { rank: module.rank(), end_dim: end.dim, grid_pass: grid.all_pass, divisible_pass: div })
}
