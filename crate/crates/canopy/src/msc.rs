//! Minimal multispecies-coalescent gene-tree generator.
//!
//! Within each branch of the species tree, the lineages present coalesce in
//! pairs at rate C(j,2) through exponential waiting times for the duration
//! of the branch (in coalescent units); survivors pass to the parent
//! branch, and everything left above the root coalesces freely. One lineage
//! is sampled per species. Gene trees are returned as canonical unrooted
//! topologies with branch lengths discarded.
//!
//! All randomness comes from ChaCha8 streams: gene tree `i` of a run uses
//! stream `i` of the run seed, so output is independent of generation
//! order and identical across platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, LogNormal};

use crate::consensus::SampleSet;
use crate::error::{Error, Result};
use crate::newick::{parse_newick, to_topology, RootedParseTree};
use crate::tree::Tree;
use crate::universe::Universe;

/// Rooted species tree with branch lengths in coalescent units.
#[derive(Debug, Clone)]
pub struct SpeciesTree {
    pub nodes: Vec<SpeciesNode>,
    pub root: usize,
}

#[derive(Debug, Clone)]
pub struct SpeciesNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Length of the branch above this node; ignored on the root.
    pub length: f64,
    /// Taxon name on leaves.
    pub name: Option<String>,
}

impl SpeciesTree {
    pub fn from_newick(text: &str) -> Result<SpeciesTree> {
        let rt = parse_newick(text)?;
        let mut nodes = Vec::with_capacity(rt.nodes.len());
        let mut names = std::collections::HashSet::new();
        for n in &rt.nodes {
            let name = if n.children.is_empty() {
                let label = n.label.clone().unwrap_or_default();
                if !names.insert(label.clone()) {
                    return Err(Error::DuplicateLeaf(label));
                }
                Some(label)
            } else {
                None
            };
            let length = n.length.unwrap_or(0.0);
            if !length.is_finite() || length < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "branch length {length} is not a non-negative finite number"
                )));
            }
            nodes.push(SpeciesNode {
                parent: n.parent,
                children: n.children.clone(),
                length,
                name,
            });
        }
        Ok(SpeciesTree { nodes, root: rt.root })
    }

    pub fn to_newick(&self) -> String {
        fn rec(t: &SpeciesTree, v: usize, out: &mut String, with_length: bool) {
            let n = &t.nodes[v];
            if n.children.is_empty() {
                out.push_str(n.name.as_deref().unwrap_or(""));
            } else {
                out.push('(');
                for (i, &c) in n.children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    rec(t, c, out, true);
                }
                out.push(')');
            }
            if with_length {
                out.push_str(&format!(":{}", n.length));
            }
        }
        let mut out = String::new();
        rec(self, self.root, &mut out, false);
        out.push(';');
        out
    }

    pub fn leaf_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .nodes
            .iter()
            .filter_map(|n| n.name.clone())
            .collect();
        names.sort_unstable();
        names
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_empty()).count()
    }

    /// The unrooted topology of the species tree itself (lengths and root
    /// discarded), over a universe of its sorted taxon names.
    pub fn topology(&self) -> Result<(Tree, Universe)> {
        let mut u = Universe::from_names(self.leaf_names())?;
        let mut rt = RootedParseTree::default();
        for n in &self.nodes {
            rt.nodes.push(crate::newick::ParseNode {
                parent: n.parent,
                children: n.children.clone(),
                label: n.name.clone(),
                length: None,
            });
        }
        rt.root = self.root;
        let t = to_topology(&rt, &mut u)?;
        Ok((t, u))
    }
}

/// Multiply every branch length by `sigma`; topology unchanged.
pub fn scale_branches(sp: &SpeciesTree, sigma: f64) -> Result<SpeciesTree> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "scale factor must be positive and finite, got {sigma}"
        )));
    }
    let mut out = sp.clone();
    for n in &mut out.nodes {
        n.length *= sigma;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub n: usize,
    pub sigma: f64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(n: usize, sigma: f64, seed: u64) -> SimConfig {
        SimConfig { n, sigma, seed }
    }
}

/// A simulated gene tree, rooted, before topology canonicalization.
/// Exposed so calibration checks can look at rooted shapes.
pub fn simulate_rooted(sp: &SpeciesTree, rng: &mut ChaCha8Rng) -> RootedParseTree {
    // lineage = node index in the growing gene tree
    let mut gene = RootedParseTree::default();
    // process species nodes in postorder
    let mut order: Vec<usize> = Vec::with_capacity(sp.nodes.len());
    let mut stack = vec![sp.root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(&sp.nodes[v].children);
    }
    let mut lineages_at: Vec<Vec<usize>> = vec![Vec::new(); sp.nodes.len()];
    for &v in order.iter().rev() {
        let mut lineages: Vec<usize> = if sp.nodes[v].children.is_empty() {
            let leaf = gene.new_node(None);
            gene.nodes[leaf].label = sp.nodes[v].name.clone();
            vec![leaf]
        } else {
            let mut pool = Vec::new();
            for &c in &sp.nodes[v].children {
                pool.append(&mut lineages_at[c]);
            }
            pool
        };
        let duration = if v == sp.root {
            f64::INFINITY
        } else {
            sp.nodes[v].length
        };
        coalesce(&mut gene, &mut lineages, duration, rng);
        lineages_at[v] = lineages;
    }
    let roots = &lineages_at[sp.root];
    debug_assert_eq!(roots.len(), 1);
    gene.root = roots[0];
    gene
}

/// Pairwise coalescence within one branch: with `j` lineages the waiting
/// time to the next merge is Exp(C(j,2)).
fn coalesce(gene: &mut RootedParseTree, lineages: &mut Vec<usize>, duration: f64, rng: &mut ChaCha8Rng) {
    let mut elapsed = 0.0;
    while lineages.len() >= 2 {
        let j = lineages.len() as f64;
        let rate = j * (j - 1.0) / 2.0;
        if duration.is_finite() {
            let wait = Exp::new(rate).unwrap().sample(rng);
            elapsed += wait;
            if elapsed > duration {
                break;
            }
        }
        // merge a uniform pair
        let i = rng.gen_range(0..lineages.len());
        let a = lineages.swap_remove(i);
        let k = rng.gen_range(0..lineages.len());
        let b = lineages.swap_remove(k);
        let parent = gene.new_node(None);
        gene.nodes[parent].children = vec![a, b];
        gene.nodes[a].parent = Some(parent);
        gene.nodes[b].parent = Some(parent);
        lineages.push(parent);
    }
}

/// Simulate `cfg.n` gene trees under the coalescent on `sp` with branches
/// scaled by `cfg.sigma`. Deterministic in the seed at any thread count.
pub fn simulate_gene_trees(sp: &SpeciesTree, cfg: &SimConfig) -> Result<SampleSet> {
    if cfg.n == 0 {
        return Err(Error::EmptySample);
    }
    let scaled = scale_branches(sp, cfg.sigma)?;
    let mut universe = Universe::from_names(sp.leaf_names())?;
    let mut trees = Vec::with_capacity(cfg.n);
    for i in 0..cfg.n {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let rooted = simulate_rooted(&scaled, &mut rng);
        trees.push(to_topology(&rooted, &mut universe)?);
    }
    SampleSet::new(universe, trees)
}

/// Lognormal branch-length law given arithmetic mean and variance.
#[derive(Debug, Clone, Copy)]
pub struct LengthLaw {
    pub mean: f64,
    pub variance: f64,
}

impl LengthLaw {
    /// Log-scale parameters: `s^2 = ln(1 + v/m^2)`, `mu = ln m - s^2/2`.
    fn log_params(&self) -> Result<(f64, f64)> {
        if !(self.mean > 0.0) || !(self.variance >= 0.0) {
            return Err(Error::InvalidParameter(
                "length law needs positive mean and non-negative variance".into(),
            ));
        }
        let s2 = (1.0 + self.variance / (self.mean * self.mean)).ln();
        let mu = self.mean.ln() - s2 / 2.0;
        Ok((mu, s2.sqrt()))
    }
}

/// Uniform random rooted binary topology on `num_leaves` labeled taxa
/// (`t1..tN`), with branch lengths drawn from the lognormal law and rounded
/// to the nearest half unit.
///
/// Uniformity comes from sequential attachment: each new leaf subdivides a
/// uniformly chosen branch, counting the branch above the root.
pub fn random_species_tree(
    num_leaves: usize,
    seed: u64,
    law: LengthLaw,
) -> Result<SpeciesTree> {
    if num_leaves < 3 {
        return Err(Error::InvalidParameter(
            "a species tree needs at least 3 leaves".into(),
        ));
    }
    let (mu, s) = law.log_params()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lognormal = LogNormal::new(mu, s)
        .map_err(|e| Error::InvalidParameter(format!("bad length law: {e}")))?;

    let mut nodes: Vec<SpeciesNode> = Vec::new();
    let push = |nodes: &mut Vec<SpeciesNode>, parent, name: Option<String>| {
        nodes.push(SpeciesNode {
            parent,
            children: Vec::new(),
            length: 0.0,
            name,
        });
        nodes.len() - 1
    };

    // two-leaf start; the virtual branch above the root is attachable
    let mut root = push(&mut nodes, None, None);
    for i in 0..2 {
        let l = push(&mut nodes, Some(root), Some(format!("t{}", i + 1)));
        nodes[root].children.push(l);
    }
    for i in 2..num_leaves {
        // candidate attachment points: every non-root node's parent branch,
        // plus the branch above the root
        let mut branches: Vec<Option<usize>> =
            (0..nodes.len()).filter(|&v| v != root).map(Some).collect();
        branches.push(None); // above the root
        let &pick = branches.choose(&mut rng).unwrap();
        let leaf = push(&mut nodes, None, Some(format!("t{}", i + 1)));
        match pick {
            Some(v) => {
                let old_parent = nodes[v].parent.unwrap();
                let mid = push(&mut nodes, Some(old_parent), None);
                let pos = nodes[old_parent]
                    .children
                    .iter()
                    .position(|&c| c == v)
                    .unwrap();
                nodes[old_parent].children[pos] = mid;
                nodes[v].parent = Some(mid);
                nodes[leaf].parent = Some(mid);
                nodes[mid].children = vec![v, leaf];
            }
            None => {
                let new_root = push(&mut nodes, None, None);
                nodes[root].parent = Some(new_root);
                nodes[leaf].parent = Some(new_root);
                nodes[new_root].children = vec![root, leaf];
                root = new_root;
            }
        }
    }

    for v in 0..nodes.len() {
        if v != root {
            let raw: f64 = lognormal.sample(&mut rng);
            nodes[v].length = (raw * 2.0).round() / 2.0;
        }
    }
    Ok(SpeciesTree { nodes, root })
}
