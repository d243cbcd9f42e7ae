//! Command-line interface: stable-consensus estimation, FDR-controlled
//! selection with sample splitting, scoring of external trees, coalescent
//! simulation, and self-verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use canopy::consensus::{
    estimate_stable, EstimateOptions, RemovalMode, SampleSet, StabilityReport,
};
use canopy::msc::{
    random_species_tree, simulate_gene_trees, LengthLaw, SimConfig, SpeciesTree,
};
use canopy::newick::{
    parse_newick, read_sample_file, to_topology, write_newick, write_scores, write_star,
};
use canopy::pipeline::{run_fdr_pipeline, sha256_file, FdrPipelineConfig, RunManifest};
use canopy::sampling::random_tree;
use canopy::similarity::{similarity, similarity_bruteforce, RhoCache};
use canopy::subposet::SubposetDoc;
use canopy::tree::{all_trees, Tree};
use canopy::{parse_rational, Error, Rational};

#[derive(Parser)]
#[command(name = "canopy", version, about = "Consensus trees with stability scores and FDR control")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOut {
    /// Worker threads (1 gives the same outputs as any other count).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the run manifest to this file instead of stdout.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a stable consensus tree from a sample file.
    Stable {
        /// Newick samples, one per line.
        #[arg(long)]
        input: PathBuf,
        /// Stability threshold in (0,1], e.g. 0.9 or 9/10.
        #[arg(long)]
        alpha: String,
        /// Output tree (Newick); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-feature stability TSV.
        #[arg(long)]
        scores: Option<PathBuf>,
        /// Decision trace (JSON lines).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Re-derive each removal candidate from the unmodified top
        /// candidate instead of stripping cumulatively.
        #[arg(long)]
        single_step_removal: bool,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Estimate with finite-sample FDR control via sample splitting.
    Fdr {
        #[arg(long)]
        input: PathBuf,
        /// Target FDR level in (0,1).
        #[arg(long)]
        q: String,
        /// Stability threshold for the seed tree.
        #[arg(long)]
        alpha: String,
        /// Threshold ceiling in (1/2,1] for the search DAG.
        #[arg(long)]
        tau: String,
        /// Fraction of samples for the seed/DAG stage.
        #[arg(long, default_value = "0.5")]
        split: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Null-agreement level; raise only when the data justifies it.
        #[arg(long, default_value = "0.5")]
        eta: String,
        /// Downward branching factor of the search DAG.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 12)]
        anchor_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Serialized search DAG for later replay.
        #[arg(long)]
        subposet_out: Option<PathBuf>,
        #[arg(long)]
        single_step_removal: bool,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Stability scores of an externally produced tree against samples.
    Score {
        #[arg(long)]
        input: PathBuf,
        /// Tree to score (Newick, first statement used).
        #[arg(long)]
        tree: PathBuf,
        /// Stability TSV; stdout when omitted.
        #[arg(long)]
        scores: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Simulate gene trees under the multispecies coalescent.
    Simulate {
        /// Rooted species tree with branch lengths (Newick).
        #[arg(long)]
        species: PathBuf,
        #[arg(long)]
        n: usize,
        /// Branch-scale factor.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Draw a random species tree with lognormal branch lengths.
    RandomSpecies {
        #[arg(long)]
        leaves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Arithmetic mean of the length law.
        #[arg(long, default_value_t = 2.0)]
        mean: f64,
        #[arg(long, default_value_t = 4.0)]
        variance: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOut,
    },
    /// Similarity of two trees: rank of a largest common subtree.
    Rho {
        file_a: PathBuf,
        file_b: PathBuf,
    },
    /// Self-checks: whole-space census and similarity fuzzing.
    Verify {
        /// Count every topology over this many leaves (at most 8).
        #[arg(long)]
        leaves: Option<usize>,
        /// Compare the similarity search against brute force on this many
        /// random pairs.
        #[arg(long)]
        rho_fuzz: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::ParseLines { .. }
        | Error::DuplicateLeaf(_)
        | Error::EmptySample
        | Error::Io(_) => 2,
        _ => 3,
    }
}

fn init_threads(threads: Option<usize>) -> usize {
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
        n.max(1)
    } else {
        rayon::current_num_threads()
    }
}

fn write_or_stdout(path: Option<&Path>, content: &str) -> canopy::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_manifest(
    manifest_path: Option<&Path>,
    command: &str,
    parameters: serde_json::Value,
    inputs: &[&Path],
    outputs: &[Option<&Path>],
    seed: Option<u64>,
    threads: usize,
    started: Instant,
) -> canopy::Result<()> {
    let mut hashed = Vec::new();
    for p in inputs {
        hashed.push((p.display().to_string(), sha256_file(p)?));
    }
    let manifest = RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        parameters,
        inputs: hashed,
        outputs: outputs
            .iter()
            .flatten()
            .map(|p| p.display().to_string())
            .collect(),
        seed,
        threads,
        duration_ms: started.elapsed().as_millis(),
    };
    let text = serde_json::to_string(&manifest).expect("manifest serializes");
    match manifest_path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

/// Newick form of an estimate; the least element serializes as a star over
/// the declared taxa.
fn tree_to_newick(t: &Tree, samples: &SampleSet) -> String {
    if t.is_least() {
        write_star(samples.universe().all_leaves(), samples.universe())
    } else {
        write_newick(t, samples.universe())
    }
}

fn parse_rational_arg(name: &str, value: &str) -> canopy::Result<Rational> {
    parse_rational(value)
        .map_err(|_| Error::InvalidParameter(format!("--{name}: not a rational: '{value}'")))
}

fn run(cli: Cli) -> canopy::Result<ExitCode> {
    match cli.command {
        Command::Stable {
            input,
            alpha,
            out,
            scores,
            trace,
            single_step_removal,
            common,
        } => {
            let started = Instant::now();
            let threads = init_threads(common.threads);
            let alpha = parse_rational_arg("alpha", &alpha)?;
            let samples = read_sample_file(&input)?;
            let cache = RhoCache::new();
            let mut opts = EstimateOptions::new(alpha);
            if single_step_removal {
                opts.removal = RemovalMode::SingleStep;
            }
            let outcome = estimate_stable(&samples, &opts, &cache)?;

            let newick = tree_to_newick(&outcome.tree, &samples) + "\n";
            write_or_stdout(out.as_deref(), &newick)?;
            if let Some(p) = &scores {
                std::fs::write(p, write_scores(&outcome.report, samples.universe()))?;
            }
            if let Some(p) = &trace {
                let mut text = String::new();
                for step in &outcome.trace {
                    text.push_str(&serde_json::to_string(step).expect("trace serializes"));
                    text.push('\n');
                }
                std::fs::write(p, text)?;
            }
            emit_manifest(
                common.manifest.as_deref(),
                "stable",
                serde_json::json!({
                    "alpha": alpha.to_string(),
                    "single_step_removal": single_step_removal,
                }),
                &[&input],
                &[out.as_deref(), scores.as_deref(), trace.as_deref()],
                None,
                threads,
                started,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fdr {
            input,
            q,
            alpha,
            tau,
            split,
            seed,
            eta,
            k,
            anchor_cap,
            out,
            trace,
            subposet_out,
            single_step_removal,
            common,
        } => {
            let started = Instant::now();
            let threads = init_threads(common.threads);
            let q = parse_rational_arg("q", &q)?;
            let alpha = parse_rational_arg("alpha", &alpha)?;
            let tau = parse_rational_arg("tau", &tau)?;
            let split = parse_rational_arg("split", &split)?;
            let eta = parse_rational_arg("eta", &eta)?;
            let samples = read_sample_file(&input)?;
            let mut cfg = FdrPipelineConfig::new(q, alpha, tau, seed);
            cfg.split = split;
            cfg.eta = eta;
            cfg.branch_factor = k;
            cfg.anchor_cap = anchor_cap;
            if single_step_removal {
                cfg.removal = RemovalMode::SingleStep;
            }
            let cache = RhoCache::new();
            let outcome = run_fdr_pipeline(&samples, &cfg, &cache)?;

            let newick = tree_to_newick(&outcome.tree, &samples) + "\n";
            write_or_stdout(out.as_deref(), &newick)?;
            if let Some(p) = &trace {
                let mut text = String::new();
                for step in &outcome.selection.trace {
                    text.push_str(&serde_json::to_string(step).expect("trace serializes"));
                    text.push('\n');
                }
                std::fs::write(p, text)?;
            }
            if let Some(p) = &subposet_out {
                let doc = SubposetDoc::from_subposet(&outcome.subposet, samples.universe());
                std::fs::write(p, serde_json::to_string_pretty(&doc).expect("dag serializes"))?;
            }
            emit_manifest(
                common.manifest.as_deref(),
                "fdr",
                serde_json::json!({
                    "q": q.to_string(),
                    "alpha": alpha.to_string(),
                    "tau": tau.to_string(),
                    "split": split.to_string(),
                    "eta": eta.to_string(),
                    "k": k,
                    "anchor_cap": anchor_cap,
                    "n1": outcome.n1,
                    "n2": outcome.n2,
                    "permutation": outcome.permutation,
                    "single_step_removal": single_step_removal,
                }),
                &[&input],
                &[out.as_deref(), trace.as_deref(), subposet_out.as_deref()],
                Some(seed),
                threads,
                started,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Score {
            input,
            tree,
            scores,
            common,
        } => {
            let started = Instant::now();
            let threads = init_threads(common.threads);
            let samples = read_sample_file(&input)?;
            let text = std::fs::read_to_string(&tree)?;
            let statement = first_statement(&text)?;
            let rt = parse_newick(statement)?;
            // extra leaves are allowed: they join the universe and score 0
            let mut universe = samples.universe().clone();
            let scored_tree = to_topology(&rt, &mut universe)?;
            let samples = SampleSet::new(universe, samples.trees().to_vec())?;
            let cache = RhoCache::new();
            let report = StabilityReport::for_tree(&scored_tree, &samples, &cache)?;
            write_or_stdout(
                scores.as_deref(),
                &write_scores(&report, samples.universe()),
            )?;
            emit_manifest(
                common.manifest.as_deref(),
                "score",
                serde_json::json!({}),
                &[&input, &tree],
                &[scores.as_deref()],
                None,
                threads,
                started,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            species,
            n,
            sigma,
            seed,
            out,
            common,
        } => {
            let started = Instant::now();
            let threads = init_threads(common.threads);
            let text = std::fs::read_to_string(&species)?;
            let sp = SpeciesTree::from_newick(first_statement(&text)?)?;
            let samples = simulate_gene_trees(&sp, &SimConfig::new(n, sigma, seed))?;
            let mut lines = String::new();
            for t in samples.trees() {
                lines.push_str(&tree_to_newick(t, &samples));
                lines.push('\n');
            }
            std::fs::write(&out, lines)?;
            emit_manifest(
                common.manifest.as_deref(),
                "simulate",
                serde_json::json!({ "n": n, "sigma": sigma }),
                &[&species],
                &[Some(out.as_path())],
                Some(seed),
                threads,
                started,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::RandomSpecies {
            leaves,
            seed,
            mean,
            variance,
            out,
            common,
        } => {
            let started = Instant::now();
            let threads = init_threads(common.threads);
            let sp = random_species_tree(leaves, seed, LengthLaw { mean, variance })?;
            write_or_stdout(out.as_deref(), &(sp.to_newick() + "\n"))?;
            emit_manifest(
                common.manifest.as_deref(),
                "random-species",
                serde_json::json!({ "leaves": leaves, "mean": mean, "variance": variance }),
                &[],
                &[out.as_deref()],
                Some(seed),
                threads,
                started,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Rho { file_a, file_b } => {
            let text_a = std::fs::read_to_string(&file_a)?;
            let text_b = std::fs::read_to_string(&file_b)?;
            let mut universe = canopy::Universe::new();
            let ta = to_topology(&parse_newick(first_statement(&text_a)?)?, &mut universe)?;
            let tb = to_topology(&parse_newick(first_statement(&text_b)?)?, &mut universe)?;
            let r = similarity(&ta, &tb);
            let witness = if r.witness.is_least() {
                "T0".to_string()
            } else {
                write_newick(&r.witness, &universe)
            };
            println!("rho\t{}", r.rank);
            println!("witness\t{witness}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            leaves,
            rho_fuzz,
            seed,
        } => {
            let mut failed = false;
            if let Some(n) = leaves {
                let count = all_trees(n)?.count();
                let expected = match n {
                    6 => Some(1055usize),
                    7 => Some(28_704),
                    8 => Some(1_066_275),
                    _ => None,
                };
                match expected {
                    Some(e) if e == count => println!("census leaves={n} count={count} PASS"),
                    Some(e) => {
                        println!("census leaves={n} count={count} expected={e} FAIL");
                        failed = true;
                    }
                    None => println!("census leaves={n} count={count}"),
                }
            }
            if let Some(pairs) = rho_fuzz {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut agree = 0usize;
                for _ in 0..pairs {
                    let a = random_tree(&mut rng, 7);
                    let b = random_tree(&mut rng, 7);
                    if similarity(&a, &b).rank == similarity_bruteforce(&a, &b)? {
                        agree += 1;
                    }
                }
                println!(
                    "rho-fuzz agree={agree}/{pairs} {}",
                    if agree == pairs { "PASS" } else { "FAIL" }
                );
                if agree != pairs {
                    failed = true;
                }
            }
            if leaves.is_none() && rho_fuzz.is_none() {
                return Err(Error::InvalidParameter(
                    "verify needs --leaves and/or --rho-fuzz".into(),
                ));
            }
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn first_statement(text: &str) -> canopy::Result<&str> {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or(Error::EmptySample)
}
