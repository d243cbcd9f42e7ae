//! End-to-end estimation pipelines shared by the command-line tool and the
//! acceptance suite: seeded shuffle-and-split of the samples, stable-seed
//! estimation on the first half, search-DAG construction, and the
//! FDR-controlled walk on the held-out half.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::consensus::{
    estimate_stable, EstimateOptions, EstimateOutcome, RemovalMode, SampleSet,
};
use crate::error::{Error, Result};
use crate::fdr::{select_fdr, FdrConfig, SelectOutcome};
use crate::similarity::RhoCache;
use crate::subposet::{build_subposet, Subposet, SubposetParams};
use crate::Rational;

#[derive(Debug, Clone)]
pub struct FdrPipelineConfig {
    pub q: Rational,
    pub alpha: Rational,
    pub tau: Rational,
    /// Fraction of samples used for the seed/DAG stage; the rest feeds the
    /// selector. In (0,1).
    pub split: Rational,
    pub eta: Rational,
    pub branch_factor: usize,
    pub anchor_cap: u32,
    pub seed: u64,
    pub removal: RemovalMode,
}

impl FdrPipelineConfig {
    pub fn new(q: Rational, alpha: Rational, tau: Rational, seed: u64) -> Self {
        FdrPipelineConfig {
            q,
            alpha,
            tau,
            split: Rational::new(1, 2),
            eta: Rational::new(1, 2),
            branch_factor: 2,
            anchor_cap: 12,
            seed,
            removal: RemovalMode::Cumulative,
        }
    }
}

pub struct FdrPipelineOutcome {
    pub tree: crate::tree::Tree,
    pub stable: EstimateOutcome,
    pub subposet: Subposet,
    pub selection: SelectOutcome,
    /// Permutation applied to the input order before splitting.
    pub permutation: Vec<usize>,
    pub n1: usize,
    pub n2: usize,
}

/// Shuffle the samples by the run seed, split them into the two stages, and
/// run the full selection pipeline.
pub fn run_fdr_pipeline(
    samples: &SampleSet,
    cfg: &FdrPipelineConfig,
    cache: &RhoCache,
) -> Result<FdrPipelineOutcome> {
    let zero = Rational::new(0, 1);
    let one = Rational::new(1, 1);
    if cfg.split <= zero || cfg.split >= one {
        return Err(Error::InvalidParameter(format!(
            "split must lie strictly between 0 and 1, got {}",
            cfg.split
        )));
    }
    let n = samples.len();
    let n1 = ((n as u64 * cfg.split.numer()) / cfg.split.denom()) as usize;
    let n1 = n1.clamp(1, n.saturating_sub(1));
    if n < 2 {
        return Err(Error::InvalidParameter(
            "need at least two samples to split".into(),
        ));
    }

    let mut permutation: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    permutation.shuffle(&mut rng);
    let shuffled: Vec<crate::tree::Tree> = permutation
        .iter()
        .map(|&i| samples.trees()[i].clone())
        .collect();
    let shuffled = SampleSet::new(samples.universe().clone(), shuffled)?;
    let (d1, d2) = shuffled.split_at(n1)?;

    let mut est_opts = EstimateOptions::new(cfg.alpha);
    est_opts.removal = cfg.removal;
    let stable = estimate_stable(&d1, &est_opts, cache)?;

    let fdr_cfg = FdrConfig {
        q: cfg.q,
        eta: cfg.eta,
        n2: d2.len(),
    };
    let mut params = SubposetParams::new(cfg.tau, cfg.alpha);
    params.branch_factor = cfg.branch_factor;
    params.anchor_cap = cfg.anchor_cap;
    let subposet = build_subposet(&d1, &stable.tree, &fdr_cfg, &params, cache)?;
    let selection = select_fdr(&subposet, &d2, &fdr_cfg, cache)?;

    Ok(FdrPipelineOutcome {
        tree: selection.tree.clone(),
        stable,
        subposet,
        selection,
        permutation,
        n1,
        n2: n - n1,
    })
}

/// Reproducibility record emitted with every command-line run.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub parameters: serde_json::Value,
    /// SHA-256 of each input file.
    pub inputs: Vec<(String, String)>,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
    pub threads: usize,
    pub duration_ms: u128,
}

pub fn sha256_file(path: &std::path::Path) -> Result<String> {
    use sha2::{Digest, Sha256};
    let bytes = std::fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msc::{simulate_gene_trees, SimConfig, SpeciesTree};

    #[test]
    fn pipeline_runs_end_to_end_and_is_deterministic() {
        let sp = SpeciesTree::from_newick(
            "(((t1:1,t2:1):2,(t3:1,t4:1):2):1,((t5:1,t6:1):2,(t7:1,t8:1):2):1);",
        )
        .unwrap();
        let samples = simulate_gene_trees(&sp, &SimConfig::new(40, 2.0, 5)).unwrap();
        let cfg = FdrPipelineConfig::new(
            Rational::new(1, 5),
            Rational::new(17, 20),
            Rational::new(3, 4),
            11,
        );
        let a = run_fdr_pipeline(&samples, &cfg, &RhoCache::new()).unwrap();
        let b = run_fdr_pipeline(&samples, &cfg, &RhoCache::new()).unwrap();
        assert_eq!(a.tree, b.tree);
        assert_eq!(a.permutation, b.permutation);
        assert_eq!(a.n1, 20);
        assert_eq!(a.n2, 20);
        assert!(a.subposet.validate().is_empty());
        // the split is disjoint and exhaustive by construction
        let mut p = a.permutation.clone();
        p.sort_unstable();
        assert_eq!(p, (0..40).collect::<Vec<_>>());
    }

    #[test]
    fn pipeline_rejects_bad_split() {
        let sp = SpeciesTree::from_newick("((t1:1,t2:1):5,(t3:1,t4:1):5);").unwrap();
        let samples = simulate_gene_trees(&sp, &SimConfig::new(10, 1.0, 1)).unwrap();
        let mut cfg = FdrPipelineConfig::new(
            Rational::new(1, 5),
            Rational::new(17, 20),
            Rational::new(3, 4),
            1,
        );
        cfg.split = Rational::new(0, 1);
        assert!(run_fdr_pipeline(&samples, &cfg, &RhoCache::new()).is_err());
    }
}
