use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rigidtree_core::artifacts::{read_json, write_json, EndoFile};
use rigidtree_core::config::RunConfig;
use rigidtree_core::encoder::{DistModule, TreeAssignment};
use rigidtree_core::exactlin::Field;
use rigidtree_core::pipeline::{self, PipelineError};
use rigidtree_core::rigidsys::Verdict;
use rigidtree_core::valtrees::{certify_pool, Pool};

/// Certified rigid tree pools, their module encodings, and exact Hom spaces.
#[derive(Parser)]
#[command(name = "rigidtree", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; missing fields take defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Q or Fp:P; overrides the configured field.
    #[arg(long, global = true)]
    field: Option<Field>,
    /// Comma-separated primes assigned to slots in order.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Accept uncertified pools and modules (negative controls only).
    #[arg(long, global = true)]
    allow_uncertified: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate and certify a pool: trees.json, certificate.json.
    GenTrees,
    /// Recompute the certificate of a pool: certificate.json.
    Certify {
        #[arg(long)]
        trees: PathBuf,
    },
    /// Encode a pool as a module: module.json.
    Encode {
        #[arg(long)]
        trees: PathBuf,
        /// JSON list of [prefix, tree index] pairs replacing the sequential assignment.
        #[arg(long)]
        assignment: Option<PathBuf>,
    },
    /// Endomorphism space: end-report.json, hombasis.json, endo.json.
    End {
        #[arg(long)]
        module: PathBuf,
        /// The pool the module was built from; needed by --extract.
        #[arg(long)]
        trees: Option<PathBuf>,
        /// Recover a tree homomorphism from a non-scalar witness.
        #[arg(long)]
        extract: bool,
    },
    /// Hom space between two modules: hom-report.json, hombasis.json.
    Hom {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Hom grid over subset-indexed modules: grid-report.json.
    FullyRigid {
        #[arg(long)]
        module: PathBuf,
        /// JSON list of subsets of basis positions, e.g. [[],[0],[0,1]].
        #[arg(long)]
        subsets: Option<String>,
    },
    /// Hom between prime-divisible groups: divisible-report.json.
    Divisible {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        subsets: Option<String>,
    },
    /// Extract a tree homomorphism from a stored endomorphism: extraction.json.
    ExtractHom {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        trees: PathBuf,
        /// endo.json written by `end`.
        #[arg(long)]
        matrix: PathBuf,
    },
}

fn config(c: &Common) -> Result<RunConfig, PipelineError> {
    let mut cfg = match &c.config {
        Some(p) => read_json(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(f) = c.field {
        cfg.field = f;
    }
    if let Some(p) = &c.primes {
        cfg.primes = p.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_module(path: &Path, c: &Common) -> Result<DistModule, PipelineError> {
    let m: DistModule = read_json(path)?;
    match c.field {
        Some(f) if f != m.field() => Ok(m.over(f)?),
        _ => Ok(m),
    }
}

fn subsets(arg: &Option<String>) -> Result<Vec<Vec<usize>>, PipelineError> {
    match arg {
        None => Ok(pipeline::default_subsets()),
        Some(s) => serde_json::from_str(s)
            .map_err(|e| PipelineError::Config(rigidtree_core::config::ConfigError(format!("--subsets: {e}")))),
    }
}

fn verdict_code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    let c = &cli.common;
    let out = &c.out;
    match &cli.command {
        Command::GenTrees => {
            let (pool, cert) = pipeline::gen_trees(&config(c)?)?;
            write_json(&out.join("trees.json"), &pool)?;
            write_json(&out.join("certificate.json"), &cert)?;
            println!("pool {} with {} trees, admissible", pool.id(), pool.trees.len());
        }
        Command::Certify { trees } => {
            let pool: Pool = read_json(trees)?;
            let cert = certify_pool(&pool)?;
            write_json(&out.join("certificate.json"), &cert)?;
            println!(
                "rigid={} strong={} sibling_distinct={} admissible={}",
                cert.rigid, cert.strong, cert.sibling_distinct, cert.admissible
            );
            if !cert.admissible {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Encode { trees, assignment } => {
            let pool: Pool = read_json(trees)?;
            let assignment: Option<TreeAssignment> = assignment.as_deref().map(read_json).transpose()?;
            let m = pipeline::encode(&pool, &config(c)?, assignment, c.allow_uncertified)?;
            write_json(&out.join("module.json"), &m)?;
            println!("module {} of rank {}", m.id(), m.rank());
        }
        Command::End { module, trees, extract } => {
            let m = load_module(module, c)?;
            let pool: Option<Pool> = trees.as_deref().map(read_json).transpose()?;
            let (report, basis) = pipeline::end_report(&m, pool.as_ref(), *extract, c.allow_uncertified)?;
            write_json(&out.join("end-report.json"), &report)?;
            write_json(&out.join("hombasis.json"), &pipeline::hom_basis_file(&basis))?;
            let witness = basis.mats.iter().find(|x| x.scalar_value().is_none()).unwrap_or(&basis.mats[0]);
            write_json(&out.join("endo.json"), &pipeline::endo_file(&m, witness))?;
            println!("End dimension {}, scalar only: {}", report.dim, report.scalar_only);
            return Ok(verdict_code(pipeline::end_matches(&report)));
        }
        Command::Hom { source, target } => {
            let (src, dst) = (load_module(source, c)?, load_module(target, c)?);
            let (report, basis) = pipeline::hom_report(&src, &dst, c.allow_uncertified)?;
            write_json(&out.join("hom-report.json"), &report)?;
            write_json(&out.join("hombasis.json"), &pipeline::hom_basis_file(&basis))?;
            println!("Hom dimension {}", report.dim);
            return Ok(verdict_code(report.verdict != Some(Verdict::Fail)));
        }
        Command::FullyRigid { module, subsets: s } => {
            let m = load_module(module, c)?;
            let report = pipeline::fully_rigid(&m, &subsets(s)?, c.allow_uncertified)?;
            write_json(&out.join("grid-report.json"), &report)?;
            let passed = report.cells.iter().filter(|x| x.verdict == Verdict::Pass).count();
            println!("{passed}/{} cells match", report.cells.len());
            return Ok(verdict_code(report.all_pass));
        }
        Command::Divisible { module, subsets: s } => {
            let m = load_module(module, c)?;
            let cfg = config(c)?;
            let report = pipeline::divisible(&m, &subsets(s)?, &cfg.primes, None, c.allow_uncertified)?;
            write_json(&out.join("divisible-report.json"), &report)?;
            let passed = report.cells.iter().filter(|x| x.verdict == Verdict::Pass).count();
            println!("{passed}/{} cells match", report.cells.len());
            return Ok(verdict_code(report.all_pass));
        }
        Command::ExtractHom { module, trees, matrix } => {
            let m = load_module(module, c)?;
            let pool: Pool = read_json(trees)?;
            let endo: EndoFile = read_json(matrix)?;
            let outcome = pipeline::extract_hom(&m, &pool, &endo)?;
            write_json(&out.join("extraction.json"), &outcome)?;
            match &outcome.error {
                None => println!("extracted a verified tree homomorphism"),
                Some(e) => println!("no extraction: {e}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
