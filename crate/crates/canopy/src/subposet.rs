//! Data-driven restriction of the search space: a DAG of topologies built
//! as a greedy chain through a stable seed tree plus a k-ary bifurcation
//! fan below an anchor rank, every edge a covering pair of the full order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::consensus::SampleSet;
use crate::error::{Error, Result};
use crate::fdr::FdrConfig;
use crate::similarity::RhoCache;
use crate::tree::{covered_trees, covering_trees, covers, Split, Tree};
use crate::universe::{LeafId, LeafSet, Universe};
use crate::Rational;

/// Restricted search DAG: deduplicated nodes, covering-pair edges, cached
/// maximal set and rank ceiling.
#[derive(Debug, Clone)]
pub struct Subposet {
    nodes: Vec<Tree>,
    /// `(lo, hi)` with `hi` covering `lo`; sorted, deduplicated.
    edges: Vec<(usize, usize)>,
    covers_of: Vec<Vec<usize>>,
    covered_by: Vec<Vec<usize>>,
    maximal: Vec<usize>,
    r_max: u32,
    least: usize,
}

impl Subposet {
    /// Assemble and validate a DAG from explicit parts.
    pub fn from_parts(nodes: Vec<Tree>, mut edges: Vec<(usize, usize)>) -> Result<Subposet> {
        edges.sort_unstable();
        edges.dedup();
        let mut covers_of = vec![Vec::new(); nodes.len()];
        let mut covered_by = vec![Vec::new(); nodes.len()];
        for &(lo, hi) in &edges {
            if lo >= nodes.len() || hi >= nodes.len() {
                return Err(Error::InvalidParameter("edge endpoint out of range".into()));
            }
            covers_of[lo].push(hi);
            covered_by[hi].push(lo);
        }
        let maximal: Vec<usize> = (0..nodes.len())
            .filter(|&i| covers_of[i].is_empty() && !nodes[i].is_least())
            .collect();
        let r_max = nodes.iter().map(|t| t.rank()).max().unwrap_or(0);
        let least = nodes
            .iter()
            .position(|t| t.is_least())
            .ok_or_else(|| Error::InvalidParameter("search DAG lacks the least element".into()))?;
        let sub = Subposet {
            nodes,
            edges,
            covers_of,
            covered_by,
            maximal,
            r_max,
            least,
        };
        let issues = sub.validate();
        if !issues.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "invalid search DAG: {}",
                issues.join("; ")
            )));
        }
        Ok(sub)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &Tree {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[Tree] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn covers_of(&self, i: usize) -> Vec<usize> {
        self.covers_of[i].clone()
    }

    pub fn covered_by(&self, i: usize) -> Vec<usize> {
        self.covered_by[i].clone()
    }

    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    pub fn r_max(&self) -> u32 {
        self.r_max
    }

    pub fn least_index(&self) -> usize {
        self.least
    }

    /// Structural diagnostics; empty when the DAG is well-formed: nodes
    /// deduplicated, the least element present, every edge a covering pair
    /// (so ranks step by exactly one), and every node reachable from the
    /// least element.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let mut sorted = self.nodes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.nodes.len() {
            issues.push("duplicate nodes".into());
        }
        if !self.nodes.iter().any(|t| t.is_least()) {
            issues.push("least element missing".into());
            return issues;
        }
        for &(lo, hi) in &self.edges {
            if !covers(&self.nodes[lo], &self.nodes[hi]) {
                issues.push(format!("edge {lo}->{hi} is not a covering pair"));
            } else if self.nodes[hi].rank() != self.nodes[lo].rank() + 1 {
                issues.push(format!("edge {lo}->{hi} jumps ranks"));
            }
        }
        // reachability from the least element along edges
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.least];
        seen[self.least] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.covers_of[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        for (i, ok) in seen.iter().enumerate() {
            if !ok {
                issues.push(format!("node {i} unreachable from the least element"));
            }
        }
        issues
    }
}

/// Construction parameters.
#[derive(Debug, Clone)]
pub struct SubposetParams {
    /// Ceiling the per-node threshold must stay under, in (1/2, 1].
    pub tau: Rational,
    /// Downward branching factor, at least 2.
    pub branch_factor: usize,
    /// Hard cap on the anchor rank (bounds the bifurcation fan).
    pub anchor_cap: u32,
    /// Stability threshold used for the seed tree.
    pub alpha: Rational,
}

impl SubposetParams {
    pub fn new(tau: Rational, alpha: Rational) -> SubposetParams {
        SubposetParams {
            tau,
            branch_factor: 2,
            anchor_cap: 12,
            alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau <= Rational::new(1, 2) || self.tau > Rational::new(1, 1) {
            return Err(Error::InvalidParameter(format!(
                "tau must lie in (1/2, 1], got {}",
                self.tau
            )));
        }
        if self.branch_factor < 2 {
            return Err(Error::InvalidParameter(
                "branch factor must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Rank below which the DAG fans out:
/// `floor(log_k(q) + n2 (tau - eta)^2 log_k(e) + 1)`, clamped to
/// `[0, anchor_cap]`. Chosen so every node's threshold stays at or below
/// `tau`.
pub fn anchor_rank(cfg: &FdrConfig, p: &SubposetParams) -> u32 {
    let k = p.branch_factor as f64;
    let raw = to_f64(cfg.q).ln() / k.ln()
        + cfg.n2 as f64 * (to_f64(p.tau) - (1.0 - to_f64(cfg.eta))).powi(2) / k.ln()
        + 1.0;
    let floored = raw.floor();
    if floored < 0.0 {
        0
    } else {
        (floored as u32).min(p.anchor_cap)
    }
}

/// Greedy construction around a stable seed tree.
///
/// Above the anchor rank the DAG is a chain: from the seed, repeatedly move
/// to the best-scoring covering tree up to a maximal element, and to the
/// best-scoring covered tree down to the anchor. From the anchor node it
/// fans out downward, keeping the `branch_factor` best-scoring covered
/// trees of each node until the least element; converging branches merge.
/// Seeds at or below the anchor first climb to the anchor instead.
pub fn build_subposet(
    d1: &SampleSet,
    stable: &Tree,
    cfg: &FdrConfig,
    p: &SubposetParams,
    cache: &RhoCache,
) -> Result<Subposet> {
    p.validate()?;
    cfg.validate()?;
    let universe_size = d1.universe().len();
    let r_anchor = anchor_rank(cfg, p);

    let mut nodes: Vec<Tree> = Vec::new();
    let mut index: HashMap<Tree, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    add_node_pair(&Tree::least(), &mut index, &mut nodes);
    add_node_pair(stable, &mut index, &mut nodes);

    // climb: best-scoring covers from `from` until `stop` says done
    let climb = |mut cur: Tree,
                 stop: &dyn Fn(&Tree) -> bool,
                 nodes: &mut Vec<Tree>,
                 index: &mut HashMap<Tree, usize>,
                 edges: &mut Vec<(usize, usize)>|
     -> Result<Tree> {
        while !stop(&cur) {
            let moves = ranked_moves_up(&cur, universe_size, d1, cache)?;
            let Some(next) = moves.into_iter().next() else {
                break; // maximal
            };
            let (lo, _) = add_node_pair(&cur, index, nodes);
            let (hi, _) = add_node_pair(&next, index, nodes);
            edges.push((lo, hi));
            cur = next;
        }
        Ok(cur)
    };

    fn add_node_pair(
        t: &Tree,
        index: &mut HashMap<Tree, usize>,
        nodes: &mut Vec<Tree>,
    ) -> (usize, bool) {
        if let Some(&i) = index.get(t) {
            (i, false)
        } else {
            nodes.push(t.clone());
            index.insert(t.clone(), nodes.len() - 1);
            (nodes.len() - 1, true)
        }
    }

    let anchor: Tree;
    if stable.rank() > r_anchor {
        // up from the seed, then down from the seed to the anchor rank
        climb(
            stable.clone(),
            &|_| false,
            &mut nodes,
            &mut index,
            &mut edges,
        )?;
        let mut cur = stable.clone();
        while cur.rank() > r_anchor {
            let next = best_move_down(&cur, d1, cache)?
                .expect("a tree above rank zero always covers something");
            let (hi, _) = add_node_pair(&cur, &mut index, &mut nodes);
            let (lo, _) = add_node_pair(&next, &mut index, &mut nodes);
            edges.push((lo, hi));
            cur = next;
        }
        anchor = cur;
    } else {
        // up from the seed to the anchor rank, then on to a maximal element
        let a = climb(
            stable.clone(),
            &|t: &Tree| t.rank() >= r_anchor,
            &mut nodes,
            &mut index,
            &mut edges,
        )?;
        climb(a.clone(), &|_| false, &mut nodes, &mut index, &mut edges)?;
        anchor = a;
    }

    // k-ary fan from the anchor down to the least element
    let mut queue: std::collections::VecDeque<Tree> = std::collections::VecDeque::new();
    queue.push_back(anchor);
    let mut expanded: std::collections::HashSet<Tree> = std::collections::HashSet::new();
    while let Some(t) = queue.pop_front() {
        if t.is_least() || !expanded.insert(t.clone()) {
            continue;
        }
        let mut moves = ranked_moves_down(&t, d1, cache)?;
        moves.truncate(p.branch_factor);
        for next in moves {
            let (hi, _) = add_node_pair(&t, &mut index, &mut nodes);
            let (lo, fresh) = add_node_pair(&next, &mut index, &mut nodes);
            edges.push((lo, hi));
            if fresh {
                queue.push_back(next);
            } else if !expanded.contains(&next) {
                queue.push_back(next);
            }
        }
    }

    Subposet::from_parts(nodes, edges)
}

/// Covering trees of `t`, best score first, canonical tie-break.
fn ranked_moves_up(
    t: &Tree,
    universe_size: usize,
    d: &SampleSet,
    cache: &RhoCache,
) -> Result<Vec<Tree>> {
    let mut scored: Vec<(Tree, Rational)> = Vec::new();
    for c in covering_trees(t, universe_size) {
        let s = crate::consensus::score(t, &c, d, cache)?;
        scored.push((c, s));
    }
    scored.sort_by(|(ta, sa), (tb, sb)| sb.cmp(sa).then_with(|| ta.cmp(tb)));
    Ok(scored.into_iter().map(|(t, _)| t).collect())
}

/// Trees covered by `t`, best score first, canonical tie-break.
fn ranked_moves_down(t: &Tree, d: &SampleSet, cache: &RhoCache) -> Result<Vec<Tree>> {
    let mut scored: Vec<(Tree, Rational)> = Vec::new();
    for c in covered_trees(t) {
        let s = crate::consensus::score(&c, t, d, cache)?;
        scored.push((c, s));
    }
    scored.sort_by(|(ta, sa), (tb, sb)| sb.cmp(sa).then_with(|| ta.cmp(tb)));
    Ok(scored.into_iter().map(|(t, _)| t).collect())
}

fn best_move_down(t: &Tree, d: &SampleSet, cache: &RhoCache) -> Result<Option<Tree>> {
    Ok(ranked_moves_down(t, d, cache)?.into_iter().next())
}

/// Serialized form: the interning table, nodes as (leaves, split sides),
/// edges, and per-node rank. Enough to replay a selection run without
/// rebuilding.
#[derive(Debug, Serialize, Deserialize)]
pub struct SubposetDoc {
    pub taxa: Vec<String>,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<(usize, usize)>,
    pub r_max: u32,
    pub maximal: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NodeDoc {
    pub leaves: Vec<u32>,
    /// Each split as its side holding the smallest leaf id.
    pub splits: Vec<Vec<u32>>,
    pub rank: u32,
}

impl SubposetDoc {
    pub fn from_subposet(sub: &Subposet, u: &Universe) -> SubposetDoc {
        SubposetDoc {
            taxa: u.names().to_vec(),
            nodes: sub
                .nodes()
                .iter()
                .map(|t| NodeDoc {
                    leaves: t.leaves().iter().map(|id| id.0).collect(),
                    splits: t
                        .splits()
                        .iter()
                        .map(|s| s.side_a().iter().map(|id| id.0).collect())
                        .collect(),
                    rank: t.rank(),
                })
                .collect(),
            edges: sub.edges().to_vec(),
            r_max: sub.r_max(),
            maximal: sub.maximal().to_vec(),
        }
    }

    pub fn to_subposet(&self) -> Result<(Subposet, Universe)> {
        let u = Universe::from_names(self.taxa.iter())?;
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let leaves = LeafSet::from_ids(n.leaves.iter().map(|&i| LeafId(i)));
            let splits: Result<Vec<Split>> = n
                .splits
                .iter()
                .map(|side| {
                    let a = LeafSet::from_ids(side.iter().map(|&i| LeafId(i)));
                    Split::try_new(a, leaves.minus(a))
                })
                .collect();
            nodes.push(Tree::canonicalize(leaves, splits?)?);
        }
        Ok((Subposet::from_parts(nodes, self.edges.clone())?, u))
    }
}
