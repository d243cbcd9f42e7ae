//! Similarity between two topologies: the rank of a largest common subtree.
//!
//! The exact search enumerates "common splits" — agreement bipartitions of
//! one edge from each tree after discarding the leaves on which they
//! disagree — and runs a pruned depth-first search over subsets of them. A
//! chosen subset induces the candidate tree whose leaf set is the
//! intersection of the subset's supports and whose splits are the chosen
//! splits projected onto that leaf set; the subset is valid when every
//! projection keeps two leaves a side and the projections stay distinct and
//! pairwise compatible.

use dashmap::DashMap;

use crate::error::Result;
use crate::tree::{all_trees_over, Split, Tree};
use crate::universe::LeafSet;

/// Agreement bipartition of one edge pair, with provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommonSplit {
    pub split: Split,
    /// (edge index in the first tree, edge index in the second, flag for the
    /// crossed pairing).
    pub origin: (u16, u16, bool),
}

/// All agreement splits of edge pairs, largest support first.
///
/// For edges `A|B` and `C|D` the two pairings are `A∩C|B∩D` and
/// `A∩D|B∩C`; a pairing is kept when both sides keep at least two leaves.
/// Duplicates keep their first origin.
pub fn common_splits(t1: &Tree, t2: &Tree) -> Vec<CommonSplit> {
    let mut out: Vec<CommonSplit> = Vec::new();
    for (i, s1) in t1.splits().iter().enumerate() {
        for (j, s2) in t2.splits().iter().enumerate() {
            for crossed in [false, true] {
                let (x, y) = if crossed {
                    (s1.side_a().intersect(s2.side_b()), s1.side_b().intersect(s2.side_a()))
                } else {
                    (s1.side_a().intersect(s2.side_a()), s1.side_b().intersect(s2.side_b()))
                };
                if x.len() >= 2 && y.len() >= 2 {
                    let split = Split::new(x, y);
                    if !out.iter().any(|c| c.split == split) {
                        out.push(CommonSplit {
                            split,
                            origin: (i as u16, j as u16, crossed),
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        b.split
            .support()
            .len()
            .cmp(&a.split.support().len())
            .then_with(|| a.split.cmp(&b.split))
    });
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityResult {
    pub rank: u32,
    /// One largest common subtree; the first maximizer in search order.
    pub witness: Tree,
}

/// Exact similarity of two trees with a witness.
pub fn similarity(t1: &Tree, t2: &Tree) -> SimilarityResult {
    // subtree fast path: the smaller tree is itself a maximizer
    if t1.leq(t2) {
        return SimilarityResult {
            rank: t1.rank(),
            witness: t1.clone(),
        };
    }
    if t2.leq(t1) {
        return SimilarityResult {
            rank: t2.rank(),
            witness: t2.clone(),
        };
    }

    let cs = common_splits(t1, t2);
    let mut best = SimilarityResult {
        rank: 0,
        witness: Tree::least(),
    };
    if cs.is_empty() {
        return best;
    }
    let cap = t1.splits().len().min(t2.splits().len()) as u32;
    let shared = t1.leaves().intersect(t2.leaves());
    let mut chosen: Vec<Split> = Vec::new();
    dfs(&cs, 0, &mut chosen, shared, cap, &mut best);
    best
}

fn dfs(
    cs: &[CommonSplit],
    start: usize,
    chosen: &mut Vec<Split>,
    support: LeafSet,
    cap: u32,
    best: &mut SimilarityResult,
) {
    for i in start..cs.len() {
        // rank attainable through this branch: current support bounds the
        // leaf count, and the split count is bounded by the splits still
        // available, the smaller input tree, and what a tree on `support`
        // can hold. Non-increasing in i, so prune the whole tail at once.
        let max_splits = (chosen.len() + (cs.len() - i)) as u32;
        let bound = support.len().saturating_sub(4)
            + max_splits.min(cap).min(support.len().saturating_sub(3));
        if bound <= best.rank {
            return;
        }

        let s = cs[i].split;
        let new_support = support.intersect(s.support());
        if new_support.len() < 4 {
            continue;
        }
        chosen.push(s);
        if let Some(restricted) = project_valid(chosen, new_support) {
            let rank = new_support.len() - 4 + restricted.len() as u32;
            if rank > best.rank {
                best.rank = rank;
                best.witness = Tree::from_compatible(new_support, restricted.clone());
            }
            dfs(cs, i + 1, chosen, new_support, cap, best);
        }
        chosen.pop();
    }
}

/// Project every chosen split onto `support`; `None` unless all stay
/// non-trivial, pairwise distinct, and pairwise compatible.
fn project_valid(chosen: &[Split], support: LeafSet) -> Option<Vec<Split>> {
    let mut out: Vec<Split> = Vec::with_capacity(chosen.len());
    for &s in chosen {
        let r = s.restrict(support)?;
        for &prev in &out {
            if prev == r || !prev.compatible(r) {
                return None;
            }
        }
        out.push(r);
    }
    Some(out)
}

/// Brute-force similarity: scan the whole space over the shared leaves.
/// Test oracle; guarded.
pub fn similarity_bruteforce(t1: &Tree, t2: &Tree) -> Result<u32> {
    let shared = t1.leaves().intersect(t2.leaves());
    let mut best = 0u32;
    for z in all_trees_over(shared)? {
        if z.rank() > best && z.leq(t1) && z.leq(t2) {
            best = z.rank();
        }
    }
    Ok(best)
}

/// All largest common subtrees. Same guard as the brute-force oracle.
pub fn maximal_common_trees(t1: &Tree, t2: &Tree) -> Result<Vec<Tree>> {
    let shared = t1.leaves().intersect(t2.leaves());
    let mut best = 0u32;
    let mut out: Vec<Tree> = vec![Tree::least()];
    for z in all_trees_over(shared)? {
        if z.leq(t1) && z.leq(t2) {
            match z.rank().cmp(&best) {
                std::cmp::Ordering::Greater => {
                    best = z.rank();
                    out.clear();
                    out.push(z);
                }
                std::cmp::Ordering::Equal => {
                    if !z.is_least() || best == 0 {
                        out.push(z);
                    }
                }
                std::cmp::Ordering::Less => {}
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Shared memo for similarity values, keyed by the order-normalized pair.
/// Concurrent lookups of the same pair always agree because the underlying
/// function is pure; entries persist until [`RhoCache::clear`].
#[derive(Debug, Default)]
pub struct RhoCache {
    map: DashMap<(Tree, Tree), u32>,
}

impl RhoCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&self, t1: &Tree, t2: &Tree) -> u32 {
        let key = if t1 <= t2 {
            (t1.clone(), t2.clone())
        } else {
            (t2.clone(), t1.clone())
        };
        if let Some(v) = self.map.get(&key) {
            return *v;
        }
        let v = similarity(t1, t2).rank;
        self.map.insert(key, v);
        v
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn clear(&self) {
        self.map.clear();
    }
}
