//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidtree_core::config::RunConfig;
use rigidtree_core::encoder::{build_index_set, build_module, DistModule, SIndex, TreeAssignment, WIndex};
use rigidtree_core::exactlin::{Field, Matrix, SparseVec};
use rigidtree_core::homsolver::{
    brute_force_hom_space, end_space, extract_tree_hom, hom_space, verify_hom, ExtractError,
};
use rigidtree_core::pipeline;
use rigidtree_core::rigidsys::{DivisibleHom, Verdict};
use rigidtree_core::valtrees::{
    check_tree_hom, enumerate_valuated_homs, find_valuated_hom, random_tree, Pool, ValuatedTree,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn t1_pool() -> Pool {
    let a = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[0, 0], 2)]);
    Pool { lambda: 2, depth: 2, vmax: 3, seed: 0, trees: vec![a] }
}

fn t1_module(field: Field) -> DistModule {
    let cfg = RunConfig { field, ..RunConfig::default() };
    pipeline::encode(&t1_pool(), &cfg, None, false).expect("toy encodes")
}

fn medium() -> (Pool, DistModule) {
    let cfg = RunConfig::medium();
    let (pool, _) = pipeline::gen_trees(&cfg).expect("medium pool generates");
    let m = pipeline::encode(&pool, &cfg, None, false).expect("medium pool encodes");
    (pool, m)
}

fn label(parts: &[&[u32]]) -> SIndex {
    SIndex::from_slices(parts)
}

/// Identity except that the listed columns are redirected.
fn redirect(m: &DistModule, moves: &[(SIndex, SIndex)]) -> Matrix {
    let f = m.field();
    let mut phi = Matrix::identity(f, m.rank());
    for (from, to) in moves {
        let (a, b) = (m.position(from).unwrap(), m.position(to).unwrap());
        phi.set(a, a, f.zero());
        phi.set(b, a, f.one());
    }
    phi
}

fn ac1() -> Outcome {
    let mut pairs = 0;
    let mut with_hom = 0;
    for seed in [11u64, 12, 13] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut trees = Vec::new();
        while trees.len() < 10 {
            let lambda = rng.gen_range(2..=3);
            let depth = rng.gen_range(1..=3);
            let t = random_tree(&mut rng, lambda, depth, 2, false);
            if t.len() <= 12 {
                trees.push(t);
            }
        }
        for s in &trees {
            for d in &trees {
                let found = find_valuated_hom(s, d);
                let all = enumerate_valuated_homs(s, d, usize::MAX).map_err(|e| e.to_string())?;
                ensure!(found.is_some() == !all.homs.is_empty(), "search and enumeration disagree on seed {seed}");
                if let Some(h) = &found {
                    ensure!(check_tree_hom(s, d, h).is_ok(), "search returned an invalid map");
                    ensure!(all.homs.contains(h), "search witness missing from the enumeration");
                    with_hom += 1;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs agree ({with_hom} with a homomorphism)"))
}

const SLOTS: [WIndex; 6] = [
    WIndex::D0,
    WIndex::D1,
    WIndex::D2,
    WIndex::L1 { n: 0, k: 1 },
    WIndex::L2 { n: 0, k: 1 },
    WIndex::L3 { k: 0, n: 0 },
];

fn random_module(rng: &mut ChaCha8Rng, rank: usize, keys: &[WIndex]) -> DistModule {
    let f = Field::Prime(2);
    let slots: BTreeMap<WIndex, Vec<SparseVec>> = keys
        .iter()
        .map(|w| {
            let gens = (0..rng.gen_range(0..=rank))
                .map(|_| {
                    let v: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..2)).collect();
                    SparseVec::from_i64s(f, &v)
                })
                .collect();
            (*w, gens)
        })
        .collect();
    DistModule::synthetic(f, rank, slots).expect("well formed")
}

fn ac2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut dims = BTreeMap::new();
    for _ in 0..100 {
        let nkeys = rng.gen_range(0..=SLOTS.len());
        let keys = &SLOTS[..nkeys];
        let (rx, ry) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let x = random_module(&mut rng, rx, keys);
        let y = random_module(&mut rng, ry, keys);
        let fast = hom_space(&x, &y).map_err(|e| e.to_string())?;
        let brute = brute_force_hom_space(&x, &y).map_err(|e| e.to_string())?;
        ensure!(fast == brute, "rref bases differ: {} vs {}", fast.dim(), brute.dim());
        *dims.entry(fast.dim()).or_insert(0) += 1;
    }
    Ok(format!("100 modules agree; dimension histogram {dims:?}"))
}

fn ac3() -> Outcome {
    let start = Instant::now();
    for field in [Field::Rational, Field::Prime(2)] {
        let e = end_space(&t1_module(field)).map_err(|e| e.to_string())?;
        ensure!(e.dim() == 1 && e.mats[0].is_identity(), "toy End over {field} has dimension {}", e.dim());
    }
    let toy = start.elapsed();
    ensure!(toy < Duration::from_secs(1), "toy took {toy:?}");
    let start = Instant::now();
    let (_, m) = medium();
    let e = end_space(&m).map_err(|e| e.to_string())?;
    let med = start.elapsed();
    ensure!(e.dim() == 1 && e.mats[0].is_identity(), "medium End has dimension {}", e.dim());
    ensure!(med < Duration::from_secs(60), "medium took {med:?}");
    Ok(format!("toy dim 1 over Q and F2 in {toy:.2?}; medium rank {} dim 1 in {med:.2?}", m.rank()))
}

fn ac4() -> Outcome {
    let (_, m) = medium();
    let subsets = vec![vec![], vec![0], vec![0, 1], vec![1, 2]];
    let r = pipeline::fully_rigid(&m, &subsets, false).map_err(|e| e.to_string())?;
    ensure!(r.cells.len() == 16, "grid has {} cells", r.cells.len());
    for c in &r.cells {
        let want = usize::from(c.u.iter().all(|x| c.v.contains(x)));
        ensure!(c.dim == want && (want == 0 || c.identity_generator), "cell {:?} -> {:?} has dim {}", c.u, c.v, c.dim);
        ensure!(c.verdict == Verdict::Pass, "cell {:?} -> {:?} failed", c.u, c.v);
    }
    Ok("16/16 cells match the inclusion pattern".into())
}

fn ac5() -> Outcome {
    // Duplicate assignment: one tree above two distinct prefixes.
    let a_sym = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 1)]);
    let b = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 2), (&[1, 0], 3)]);
    let pool = Pool { lambda: 2, depth: 2, vmax: 3, seed: 0, trees: vec![a_sym, b.clone()] };
    let mut asg = TreeAssignment::new();
    asg.insert(SIndex::root(), 0);
    asg.insert(label(&[&[0]]), 1);
    asg.insert(label(&[&[1]]), 1);
    let set = build_index_set(&pool, &asg, 2, true).map_err(|e| e.to_string())?;
    let m = build_module(&pool, &set, &asg, Field::Rational).map_err(|e| e.to_string())?;
    let dup_dim = end_space(&m).map_err(|e| e.to_string())?.dim();
    ensure!(dup_dim >= 2, "duplicate assignment gives End dimension {dup_dim}");
    let moves: Vec<(SIndex, SIndex)> =
        b.nodes().map(|nu| (label(&[&[0]]).extend(nu), label(&[&[1]]).extend(nu))).collect();
    let phi = redirect(&m, &moves);
    ensure!(verify_hom(&m, &m, &phi).is_ok(), "copy map is not an endomorphism");
    let x = extract_tree_hom(&m, &pool, &phi).map_err(|e| e.to_string())?;
    let (s, t) = (&pool.trees[x.source_tree], &pool.trees[x.target_tree]);
    ensure!(check_tree_hom(s, t, &x.hom).is_ok(), "copy-map extraction fails the tree checker");

    // A top-stratum tree with a non-identity self-hom.
    let c = ValuatedTree::from_slices(&[(&[], 0), (&[0], 1), (&[1], 1)]);
    let pool_c = Pool { lambda: 2, depth: 1, vmax: 2, seed: 0, trees: vec![c.clone()] };
    let asg = TreeAssignment::sequential(&pool_c, 1).map_err(|e| e.to_string())?;
    let set = build_index_set(&pool_c, &asg, 1, false).map_err(|e| e.to_string())?;
    let mc = build_module(&pool_c, &set, &asg, Field::Rational).map_err(|e| e.to_string())?;
    let top_dim = end_space(&mc).map_err(|e| e.to_string())?.dim();
    ensure!(top_dim >= 2, "top-stratum self-hom gives End dimension {top_dim}");
    let phi = redirect(&mc, &[(label(&[&[1]]), label(&[&[0]]))]);
    let y = extract_tree_hom(&mc, &pool_c, &phi).map_err(|e| e.to_string())?;
    ensure!(check_tree_hom(&c, &c, &y.hom).is_ok() && !y.hom.is_identity(), "collapse extraction is wrong");

    // Certified configurations: nothing to extract from any End basis matrix.
    let mut certified = vec![(t1_pool(), t1_module(Field::Rational))];
    certified.push(medium());
    let (gp, _) = pipeline::gen_trees(&RunConfig::default()).map_err(|e| e.to_string())?;
    let gm = pipeline::encode(&gp, &RunConfig::default(), None, false).map_err(|e| e.to_string())?;
    certified.push((gp, gm));
    for (p, m) in &certified {
        for mat in &end_space(m).map_err(|e| e.to_string())?.mats {
            let r = extract_tree_hom(m, p, mat);
            ensure!(r == Err(ExtractError::NoOffDiagonalSupport), "certified module {} gave {r:?}", m.id());
        }
    }
    Ok(format!(
        "duplicate: dim {dup_dim}, extracted {} -> {}; top stratum: dim {top_dim}; {} certified modules clean",
        x.source,
        x.target,
        certified.len()
    ))
}

fn ac6() -> Outcome {
    let subsets = pipeline::default_subsets();
    let mut summary = Vec::new();
    for (name, m) in [("toy", t1_module(Field::Rational)), ("medium", medium().1)] {
        let r = pipeline::divisible(&m, &subsets, &[2, 3, 5, 7], None, false).map_err(|e| e.to_string())?;
        for c in &r.cells {
            let want = if c.u.iter().all(|x| c.v.contains(x)) { DivisibleHom::Integers } else { DivisibleHom::Zero };
            ensure!(c.result == want, "{name}: {:?} -> {:?} gave {:?}", c.u, c.v, c.result);
            if let Some(integ) = &c.integrality {
                let half = integ.probes.iter().find(|p| p.q == "1/2");
                ensure!(half.is_some_and(|p| !p.accepted), "{name}: probe 1/2 not rejected");
            }
        }
        ensure!(r.all_pass, "{name}: divisible grid failed");
        summary.push(format!("{name} 16/16"));
        let refused = pipeline::divisible(&m, &subsets, &[2, 3, 3], None, false);
        ensure!(refused.is_err(), "{name}: repeated prime accepted");
    }
    Ok(format!("{}; probe 1/2 rejected; repeated prime refused", summary.join(", ")))
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn ac7() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = RunConfig::medium();
    let sa = pipeline::run_all(&cfg, a.path()).map_err(|e| e.to_string())?;
    let sb = pipeline::run_all(&cfg, b.path()).map_err(|e| e.to_string())?;
    ensure!(sa == sb, "run summaries differ");
    let (fa, fb) = (files(a.path()), files(b.path()));
    ensure!(fa.len() >= 7, "only {} artifacts written", fa.len());
    ensure!(fa == fb, "artifacts differ between runs");
    Ok(format!("{} artifacts byte-identical across two runs", fa.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] =
        [("AC1", ac1), ("AC2", ac2), ("AC3", ac3), ("AC4", ac4), ("AC5", ac5), ("AC6", ac6), ("AC7", ac7)];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match result {
            Ok(msg) => println!("{name} PASS ({t:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{name} FAIL ({t:.2?}) {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
