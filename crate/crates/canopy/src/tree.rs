//! Canonical unrooted leaf-labeled topologies and the graded partial order
//! over them.
//!
//! A topology is stored as its leaf set plus its set of non-trivial splits;
//! that pair determines the tree up to isomorphism, so equality is
//! structural. The least element (every star tree, any leaf set) is the
//! single interned value with empty leaves and empty splits.
//!
//! Ordering: `t1 <= t2` when the leaves of `t1` are contained in those of
//! `t2` and every split of `t1` appears among the splits of `t2` restricted
//! to `t1`'s leaves. The order is graded by
//! `rank(t) = |splits| + |leaves| - 4` (0 for the least element), and a tree
//! covers another exactly when it adds one split over the same leaves or one
//! leaf attached at an internal node.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::universe::{LeafId, LeafSet, Universe};

/// Guard for exhaustive whole-space enumeration.
pub const ENUMERATION_GUARD: usize = 8;

/// A non-trivial bipartition of some leaf set.
///
/// Oriented canonically: `a` is the side holding the smallest leaf id of the
/// support, so complementary encodings compare equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    a: LeafSet,
    b: LeafSet,
}

impl Split {
    /// Canonicalize orientation. Panics in debug builds if the sides overlap
    /// or either has fewer than two leaves.
    pub fn new(x: LeafSet, y: LeafSet) -> Split {
        debug_assert!(!x.intersects(y), "split sides must be disjoint");
        debug_assert!(x.len() >= 2 && y.len() >= 2, "split sides must have >= 2 leaves");
        let min = x.union(y).min_leaf().expect("split cannot be empty");
        if x.contains(min) {
            Split { a: x, b: y }
        } else {
            Split { a: y, b: x }
        }
    }

    pub fn try_new(x: LeafSet, y: LeafSet) -> Result<Split> {
        if x.intersects(y) || x.len() < 2 || y.len() < 2 {
            return Err(Error::MalformedSplit);
        }
        Ok(Split::new(x, y))
    }

    pub fn side_a(self) -> LeafSet {
        self.a
    }

    pub fn side_b(self) -> LeafSet {
        self.b
    }

    /// The leaves this split partitions.
    pub fn support(self) -> LeafSet {
        self.a.union(self.b)
    }

    /// Project onto `y`; `None` when a side drops below two leaves.
    pub fn restrict(self, y: LeafSet) -> Option<Split> {
        let a = self.a.intersect(y);
        let b = self.b.intersect(y);
        if a.len() >= 2 && b.len() >= 2 {
            Some(Split::new(a, b))
        } else {
            None
        }
    }

    /// Both splits are assumed to partition the same leaf set: compatible
    /// when one side of one nests inside a side of the other.
    pub fn compatible(self, other: Split) -> bool {
        self.a.is_subset_of(other.a)
            || self.a.is_subset_of(other.b)
            || self.b.is_subset_of(other.a)
            || self.b.is_subset_of(other.b)
    }

    pub fn display(&self, u: &Universe) -> String {
        format!("{}|{}", self.a.display(u), self.b.display(u))
    }
}

impl Ord for Split {
    fn cmp(&self, other: &Self) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.a, self.b)
    }
}

/// See [`Split::compatible`].
pub fn splits_compatible(s1: Split, s2: Split) -> bool {
    s1.compatible(s2)
}

/// Canonical topology: leaf set plus sorted non-trivial splits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    leaves: LeafSet,
    splits: Vec<Split>,
}

impl Tree {
    /// The least element: stands for every star tree.
    pub fn least() -> Tree {
        Tree {
            leaves: LeafSet::EMPTY,
            splits: Vec::new(),
        }
    }

    pub fn is_least(&self) -> bool {
        self.splits.is_empty()
    }

    /// Normal form for a raw (leaf set, bipartition set) pair.
    ///
    /// Trivial splits are dropped and duplicates merged; anything left must
    /// be pairwise compatible. An empty result collapses to the least
    /// element, which also swallows every star tree and every input with
    /// fewer than four leaves.
    pub fn canonicalize<I>(leaves: LeafSet, raw: I) -> Result<Tree>
    where
        I: IntoIterator<Item = Split>,
    {
        let mut splits: Vec<Split> = Vec::new();
        for s in raw {
            if s.support() != leaves || s.a.intersects(s.b) {
                return Err(Error::MalformedSplit);
            }
            if s.a.len() < 2 || s.b.len() < 2 {
                continue; // trivial
            }
            splits.push(s);
        }
        splits.sort_unstable();
        splits.dedup();
        for i in 0..splits.len() {
            for j in i + 1..splits.len() {
                if !splits[i].compatible(splits[j]) {
                    return Err(Error::IncompatibleSplits);
                }
            }
        }
        if splits.is_empty() {
            return Ok(Tree::least());
        }
        Ok(Tree { leaves, splits })
    }

    /// Fast path for splits already known to be valid over `leaves`.
    pub(crate) fn from_compatible(leaves: LeafSet, mut splits: Vec<Split>) -> Tree {
        if splits.is_empty() {
            return Tree::least();
        }
        splits.sort_unstable();
        splits.dedup();
        debug_assert!(splits.iter().all(|s| s.support() == leaves));
        Tree { leaves, splits }
    }

    pub fn leaves(&self) -> LeafSet {
        self.leaves
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn has_split(&self, s: Split) -> bool {
        self.splits.binary_search(&s).is_ok()
    }

    /// Complexity grading: 0 for the least element, else
    /// `|splits| + |leaves| - 4`.
    pub fn rank(&self) -> u32 {
        if self.is_least() {
            0
        } else {
            self.splits.len() as u32 + self.leaves.len() - 4
        }
    }

    /// Project onto the leaf subset `y`, dropping splits that go trivial and
    /// merging ones that collide.
    pub fn restrict(&self, y: LeafSet) -> Tree {
        debug_assert!(y.is_subset_of(self.leaves) || self.is_least());
        let kept: Vec<Split> = self.splits.iter().filter_map(|s| s.restrict(y)).collect();
        Tree::from_compatible(y, kept)
    }

    pub fn remove_leaf(&self, a: LeafId) -> Result<Tree> {
        if !self.leaves.contains(a) {
            return Err(Error::LeafAbsent);
        }
        Ok(self.restrict(self.leaves.minus(LeafSet::singleton(a))))
    }

    pub fn collapse_split(&self, s: Split) -> Result<Tree> {
        if !self.has_split(s) {
            return Err(Error::SplitAbsent);
        }
        let splits: Vec<Split> = self.splits.iter().copied().filter(|&t| t != s).collect();
        Ok(Tree::from_compatible(self.leaves, splits))
    }

    /// Partial-order test: every feature of `self` is contained in `other`.
    pub fn leq(&self, other: &Tree) -> bool {
        if self.is_least() {
            return true;
        }
        if other.is_least() || !self.leaves.is_subset_of(other.leaves) {
            return false;
        }
        self.splits.iter().all(|s| {
            other
                .splits
                .iter()
                .any(|t| t.restrict(self.leaves) == Some(*s))
        })
    }

    /// All leaves then all splits, in canonical order.
    pub fn features(&self) -> Vec<Feature> {
        let mut out: Vec<Feature> = self.leaves.iter().map(Feature::Leaf).collect();
        out.extend(self.splits.iter().map(|&s| Feature::Edge(s)));
        out
    }

    /// Canonical textual form used in logs and traces.
    pub fn debug_string(&self, u: &Universe) -> String {
        let splits = self
            .splits
            .iter()
            .map(|s| s.display(u))
            .collect::<Vec<_>>()
            .join(" ");
        format!("leaves:{{{}}} splits:{{{}}}", self.leaves.display(u), splits)
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.leaves.cmp(&other.leaves))
            .then_with(|| self.splits.cmp(&other.splits))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_least() {
            return write!(f, "T0");
        }
        write!(f, "leaves:{:?} splits:{:?}", self.leaves, self.splits)
    }
}

/// A scored or deletable unit of structure: one leaf or one internal edge.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Feature {
    Leaf(LeafId),
    Edge(Split),
}

impl Feature {
    pub fn display(&self, u: &Universe) -> String {
        match self {
            Feature::Leaf(id) => u.name(*id).to_string(),
            Feature::Edge(s) => s.display(u),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Feature::Leaf(_) => "leaf",
            Feature::Edge(_) => "edge",
        }
    }
}

impl Ord for Feature {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Feature::Leaf(a), Feature::Leaf(b)) => a.cmp(b),
            (Feature::Leaf(_), Feature::Edge(_)) => Ordering::Less,
            (Feature::Edge(_), Feature::Leaf(_)) => Ordering::Greater,
            (Feature::Edge(a), Feature::Edge(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Feature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// True when `upper` covers `lower`: they are ordered, the rank gap is
/// exactly one, and the structural characterization holds (one extra split
/// over the same leaves, or one extra leaf whose removal restores `lower`
/// exactly; the least element is covered exactly by the four-leaf
/// single-split trees).
///
/// The rank-gap requirement also rules out single-leaf additions that
/// subdivide an edge: those satisfy the leaf clause verbatim but jump two
/// ranks, so an intermediate exists and they are not covering pairs.
pub fn covers(lower: &Tree, upper: &Tree) -> bool {
    if upper.is_least() || lower == upper {
        return false;
    }
    if lower.is_least() {
        return upper.leaves().len() == 4 && upper.splits().len() == 1;
    }
    if upper.rank() != lower.rank() + 1 || !lower.leq(upper) {
        return false;
    }
    if lower.leaves() == upper.leaves() {
        // one extra split
        let extra = upper
            .splits()
            .iter()
            .filter(|s| !lower.has_split(**s))
            .count();
        extra == 1 && lower.splits().iter().all(|s| upper.has_split(*s))
    } else {
        // one extra leaf, restriction exact
        upper.leaves().minus(lower.leaves()).len() == 1
            && &upper.restrict(lower.leaves()) == lower
    }
}

/// Bundle view of one internal node: the leaf sets hanging off each incident
/// edge. Reconstructed from the split set; never serialized.
#[derive(Debug)]
pub(crate) struct InternalNode {
    pub bundles: Vec<LeafSet>,
    /// Cluster below this node when rooted at the minimum leaf; the full
    /// non-root leaf set for the node adjacent to the root leaf.
    pub cluster: LeafSet,
    /// Index into `TreeShape::nodes` of the parent node, if any.
    pub parent: Option<usize>,
    /// Child node indices (clusters nested immediately inside).
    pub child_nodes: Vec<usize>,
}

/// Adjacency reconstruction of a non-least tree, rooted at its minimum leaf.
///
/// Nodes are the clusters of the laminar family formed by the split sides
/// avoiding the root leaf, plus the top cluster (everything but the root
/// leaf). Bundles at each node are its child clusters, its direct leaves,
/// and the upward remainder.
#[derive(Debug)]
pub(crate) struct TreeShape {
    pub nodes: Vec<InternalNode>,
    /// For every split (index into `Tree::splits`), the node whose cluster
    /// is the root-avoiding side of that split.
    pub split_node: Vec<usize>,
}

impl TreeShape {
    pub fn build(t: &Tree) -> TreeShape {
        assert!(!t.is_least());
        let root = t.leaves().min_leaf().unwrap();
        let all = t.leaves();
        let top = all.minus(LeafSet::singleton(root));

        // cluster per split: the side away from the root leaf
        let clusters: Vec<LeafSet> = t
            .splits()
            .iter()
            .map(|s| if s.side_a().contains(root) { s.side_b() } else { s.side_a() })
            .collect();

        // order clusters by size so each parent (smallest strict superset)
        // appears after its children
        let mut order: Vec<usize> = (0..clusters.len()).collect();
        order.sort_unstable_by_key(|&i| (clusters[i].len(), clusters[i]));

        // node list: clusters in size order, then the top cluster last
        let node_cluster: Vec<LeafSet> = order
            .iter()
            .map(|&i| clusters[i])
            .chain(std::iter::once(top))
            .collect();
        let n = node_cluster.len();

        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut child_nodes: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n - 1 {
            // smallest strict superset among later nodes; the top cluster
            // contains everything so a parent always exists
            let p = (i + 1..n)
                .find(|&j| node_cluster[i].is_subset_of(node_cluster[j]))
                .unwrap();
            parent[i] = Some(p);
            child_nodes[p].push(i);
        }

        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            let c = node_cluster[i];
            let mut covered = LeafSet::EMPTY;
            let mut bundles = Vec::new();
            for &ch in &child_nodes[i] {
                bundles.push(node_cluster[ch]);
                covered = covered.union(node_cluster[ch]);
            }
            for leaf in c.minus(covered).iter() {
                bundles.push(LeafSet::singleton(leaf));
            }
            bundles.push(all.minus(c)); // upward
            nodes.push(InternalNode {
                bundles,
                cluster: c,
                parent: parent[i],
                child_nodes: child_nodes[i].clone(),
            });
        }

        // map original split index -> node index
        let mut split_node = vec![0usize; clusters.len()];
        for (pos, &orig) in order.iter().enumerate() {
            split_node[orig] = pos;
        }
        TreeShape { nodes, split_node }
    }

    /// Which side of `split` contains node `v`: the side that is not inside
    /// a single bundle of `v`.
    pub fn node_side(&self, v: usize, split: Split) -> LeafSet {
        for &d in &self.nodes[v].bundles {
            if split.side_a().is_subset_of(d) {
                return split.side_b();
            }
            if split.side_b().is_subset_of(d) {
                return split.side_a();
            }
        }
        unreachable!("split does not separate the tree at this node");
    }
}

/// Leaf subsets that separate the edge of `s` from its neighboring internal
/// edges: removing any one of them in full would merge the two edges.
pub fn separating_leaf_subsets(t: &Tree, s: Split) -> Result<Vec<LeafSet>> {
    let idx = t
        .splits()
        .iter()
        .position(|&x| x == s)
        .ok_or(Error::SplitAbsent)?;
    let shape = TreeShape::build(t);
    let v = shape.split_node[idx];
    let c = shape.nodes[v].cluster;
    let mut out = Vec::new();

    // child edges: clusters nested directly below
    for &ch in &shape.nodes[v].child_nodes {
        out.push(c.minus(shape.nodes[ch].cluster));
    }
    if let Some(p) = shape.nodes[v].parent {
        // the parent's own edge, when the parent is not the top node
        if shape.nodes[p].parent.is_some() {
            out.push(shape.nodes[p].cluster.minus(c));
        }
        // sibling edges under the same parent: orienting both edges toward
        // the shared node nests C inside the complement of the sibling
        // cluster, so the difference is everything outside both clusters
        let all = t.leaves();
        for &sib in &shape.nodes[p].child_nodes {
            if sib != v {
                let d = shape.nodes[sib].cluster;
                out.push(all.minus(c).minus(d));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Every tree in the space over `universe_size` leaves that covers `t`:
/// single-split refinements at internal nodes of degree four or more, and
/// single-leaf attachments at internal nodes.
pub fn covering_trees(t: &Tree, universe_size: usize) -> Vec<Tree> {
    let mut out = Vec::new();
    if t.is_least() {
        // all four-leaf single-split trees
        let n = universe_size as u32;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let ids = [LeafId(i), LeafId(j), LeafId(k), LeafId(l)];
                        let leaves = LeafSet::from_ids(ids);
                        for partner in 1..4 {
                            let sa =
                                LeafSet::from_ids([ids[0], ids[partner]]);
                            out.push(Tree::from_compatible(
                                leaves,
                                vec![Split::new(sa, leaves.minus(sa))],
                            ));
                        }
                    }
                }
            }
        }
    } else {
        let shape = TreeShape::build(t);
        // (a) refinements: bipartition the bundles of a high-degree node
        for node in &shape.nodes {
            let d = node.bundles.len();
            if d < 4 {
                continue;
            }
            // every grouping into two parts of >= 2 bundles; fix bundle 0 on
            // one side to count each grouping once
            for mask in 0u32..(1 << (d - 1)) {
                let count_with0 = mask.count_ones() + 1;
                if count_with0 < 2 || (d as u32 - count_with0) < 2 {
                    continue;
                }
                let mut side = node.bundles[0];
                for (bit, bundle) in node.bundles.iter().enumerate().skip(1) {
                    if mask & (1 << (bit - 1)) != 0 {
                        side = side.union(*bundle);
                    }
                }
                let new_split = Split::new(side, t.leaves().minus(side));
                let mut splits = t.splits().to_vec();
                splits.push(new_split);
                out.push(Tree::from_compatible(t.leaves(), splits));
            }
        }
        // (b) leaf additions at internal nodes
        let spare = LeafSet::full(universe_size).minus(t.leaves());
        for x in spare.iter() {
            let xs = LeafSet::singleton(x);
            for v in 0..shape.nodes.len() {
                let new_leaves = t.leaves().union(xs);
                let splits: Vec<Split> = t
                    .splits()
                    .iter()
                    .map(|&s| {
                        let grow = shape.node_side(v, s);
                        if grow == s.side_a() {
                            Split::new(s.side_a().union(xs), s.side_b())
                        } else {
                            Split::new(s.side_a(), s.side_b().union(xs))
                        }
                    })
                    .collect();
                out.push(Tree::from_compatible(new_leaves, splits));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Every tree that `t` covers: single-split collapses and single-leaf
/// removals whose rank drops by exactly one (the least element appears
/// exactly when `t` has rank one).
pub fn covered_trees(t: &Tree) -> Vec<Tree> {
    assert!(!t.is_least());
    let target = t.rank() - 1;
    let mut out = Vec::new();
    for &s in t.splits() {
        let c = t.collapse_split(s).unwrap();
        if c.rank() == target {
            out.push(c);
        }
    }
    for a in t.leaves().iter() {
        let c = t.remove_leaf(a).unwrap();
        if c.rank() == target {
            out.push(c);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Stream every element of the tree space over a leaf set: the least
/// element, then every non-empty pairwise-compatible split system on every
/// leaf subset of size four or more.
pub fn all_trees(universe_size: usize) -> Result<AllTrees> {
    if universe_size > ENUMERATION_GUARD {
        return Err(Error::UniverseTooLarge(universe_size, ENUMERATION_GUARD));
    }
    Ok(AllTrees::new(LeafSet::full(universe_size)))
}

/// As [`all_trees`] but over an arbitrary leaf id set (used by the
/// brute-force similarity oracle, which enumerates over shared leaves).
pub fn all_trees_over(leaves: LeafSet) -> Result<AllTrees> {
    if leaves.len() as usize > ENUMERATION_GUARD {
        return Err(Error::UniverseTooLarge(
            leaves.len() as usize,
            ENUMERATION_GUARD,
        ));
    }
    Ok(AllTrees::new(leaves))
}

pub struct AllTrees {
    subsets: Vec<LeafSet>,
    next_subset: usize,
    buffer: Vec<Tree>,
    emitted_least: bool,
}

impl AllTrees {
    fn new(universe: LeafSet) -> AllTrees {
        let ids: Vec<LeafId> = universe.iter().collect();
        let n = ids.len();
        let mut subsets = Vec::new();
        for mask in 0u32..(1u32 << n) {
            if mask.count_ones() >= 4 {
                let mut s = LeafSet::EMPTY;
                for (i, &id) in ids.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        s.insert(id);
                    }
                }
                subsets.push(s);
            }
        }
        subsets.sort_unstable_by_key(|s| (s.len(), *s));
        AllTrees {
            subsets,
            next_subset: 0,
            buffer: Vec::new(),
            emitted_least: false,
        }
    }

    fn fill_from_subset(&mut self, leaves: LeafSet) {
        let splits = nontrivial_splits(leaves);
        let m = splits.len();
        let mut chosen: Vec<usize> = Vec::new();
        let buffer = &mut self.buffer;
        // depth-first over index-increasing compatible extensions
        fn rec(
            splits: &[Split],
            start: usize,
            chosen: &mut Vec<usize>,
            leaves: LeafSet,
            out: &mut Vec<Tree>,
        ) {
            for i in start..splits.len() {
                if chosen.iter().all(|&j| splits[j].compatible(splits[i])) {
                    chosen.push(i);
                    out.push(Tree::from_compatible(
                        leaves,
                        chosen.iter().map(|&j| splits[j]).collect(),
                    ));
                    rec(splits, i + 1, chosen, leaves, out);
                    chosen.pop();
                }
            }
        }
        rec(&splits, 0, &mut chosen, leaves, buffer);
        let _ = m;
        buffer.reverse(); // pop() below yields in generation order
    }
}

impl Iterator for AllTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if !self.emitted_least {
            self.emitted_least = true;
            return Some(Tree::least());
        }
        loop {
            if let Some(t) = self.buffer.pop() {
                return Some(t);
            }
            if self.next_subset >= self.subsets.len() {
                return None;
            }
            let leaves = self.subsets[self.next_subset];
            self.next_subset += 1;
            self.fill_from_subset(leaves);
        }
    }
}

/// All non-trivial splits of `leaves`, canonically ordered.
pub fn nontrivial_splits(leaves: LeafSet) -> Vec<Split> {
    let ids: Vec<LeafId> = leaves.iter().collect();
    let n = ids.len();
    if n < 4 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // side containing ids[0], sizes 2..=n-2
    for mask in 0u32..(1u32 << (n - 1)) {
        let size_with0 = mask.count_ones() + 1;
        if size_with0 < 2 || size_with0 > n as u32 - 2 {
            continue;
        }
        let mut sa = LeafSet::singleton(ids[0]);
        for (i, &id) in ids.iter().enumerate().skip(1) {
            if mask & (1 << (i - 1)) != 0 {
                sa.insert(id);
            }
        }
        out.push(Split::new(sa, leaves.minus(sa)));
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn leafset(ids: &[u32]) -> LeafSet {
        LeafSet::from_ids(ids.iter().map(|&i| LeafId(i)))
    }

    pub(crate) fn split(a: &[u32], b: &[u32]) -> Split {
        Split::new(leafset(a), leafset(b))
    }

    /// A,B,C,... = 0,1,2,...
    pub(crate) fn tree(leaves: &[u32], splits: &[(&[u32], &[u32])]) -> Tree {
        Tree::canonicalize(
            leafset(leaves),
            splits.iter().map(|(a, b)| split(a, b)),
        )
        .unwrap()
    }

    #[test]
    fn canonicalize_quartet() {
        let t = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        assert_eq!(t.leaves().len(), 4);
        assert_eq!(t.splits().len(), 1);
        assert_eq!(t.rank(), 1);
    }

    #[test]
    fn canonicalize_star_collapses_to_least() {
        let t = Tree::canonicalize(leafset(&[0, 1, 2]), std::iter::empty()).unwrap();
        assert!(t.is_least());
        assert_eq!(t, Tree::least());
        // stars over different leaf sets are the same element
        let t2 = Tree::canonicalize(leafset(&[0, 1, 2, 3, 4]), std::iter::empty()).unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn canonicalize_rejects_incompatible() {
        let r = Tree::canonicalize(
            leafset(&[0, 1, 2, 3]),
            [split(&[0, 1], &[2, 3]), split(&[0, 2], &[1, 3])],
        );
        assert!(matches!(r, Err(Error::IncompatibleSplits)));
    }

    #[test]
    fn canonicalize_drops_trivial_and_duplicates() {
        let raw = vec![
            split(&[0, 1], &[2, 3, 4]),
            split(&[2, 3, 4], &[0, 1]), // same split, flipped
        ];
        let t = Tree::canonicalize(leafset(&[0, 1, 2, 3, 4]), raw).unwrap();
        assert_eq!(t.splits().len(), 1);
    }

    #[test]
    fn compatibility_examples() {
        // AB|CDE vs ABC|DE share a nesting
        assert!(splits_compatible(
            split(&[0, 1], &[2, 3, 4]),
            split(&[0, 1, 2], &[3, 4])
        ));
        assert!(!splits_compatible(
            split(&[0, 1], &[2, 3]),
            split(&[0, 2], &[1, 3])
        ));
        let s = split(&[0, 1], &[2, 3]);
        assert!(splits_compatible(s, s));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Tree::least().rank(), 0);
        assert_eq!(tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]).rank(), 1);
        // a binary tree on 10 leaves has rank 13 = 2*10 - 7
        let mut splits: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        // caterpillar: splits {0..k}|rest for k = 1..=7
        let all: Vec<u32> = (0..10).collect();
        for k in 1..=7 {
            let a: Vec<u32> = (0..=k).collect();
            let b: Vec<u32> = all.iter().copied().filter(|x| !a.contains(x)).collect();
            splits.push((a, b));
        }
        let refs: Vec<(&[u32], &[u32])> =
            splits.iter().map(|(a, b)| (a.as_slice(), b.as_slice())).collect();
        let t = tree(&all, &refs);
        assert_eq!(t.rank(), 13);
        assert_eq!(t.splits().len(), 7); // binary: n - 3
    }

    #[test]
    fn restrict_examples() {
        let t = tree(&[0, 1, 2, 3, 4], &[(&[0, 1], &[2, 3, 4])]);
        let r = t.restrict(leafset(&[0, 1, 2, 3]));
        assert_eq!(r, tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]));
        let r2 = t.restrict(leafset(&[0, 2, 3, 4]));
        assert!(r2.is_least());
        assert_eq!(t.restrict(t.leaves()), t);
    }

    #[test]
    fn restriction_composes() {
        let t = tree(
            &[0, 1, 2, 3, 4, 5],
            &[(&[0, 1], &[2, 3, 4, 5]), (&[0, 1, 2], &[3, 4, 5])],
        );
        let y = leafset(&[0, 1, 2, 3, 4]);
        let z = leafset(&[0, 1, 3, 4]);
        assert_eq!(t.restrict(y).restrict(z), t.restrict(z));
    }

    #[test]
    fn remove_leaf_examples() {
        let q = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        assert!(q.remove_leaf(LeafId(2)).unwrap().is_least());
        let t = tree(&[0, 1, 2, 3, 4], &[(&[0, 1], &[2, 3, 4])]);
        assert_eq!(
            t.remove_leaf(LeafId(4)).unwrap(),
            tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])])
        );
        assert!(matches!(
            q.remove_leaf(LeafId(7)),
            Err(Error::LeafAbsent)
        ));
    }

    #[test]
    fn collapse_examples() {
        let q = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        assert!(q.collapse_split(split(&[0, 1], &[2, 3])).unwrap().is_least());
        let t = tree(
            &[0, 1, 2, 3, 4],
            &[(&[0, 1], &[2, 3, 4]), (&[0, 1, 2], &[3, 4])],
        );
        let c = t.collapse_split(split(&[0, 1], &[2, 3, 4])).unwrap();
        assert_eq!(c, tree(&[0, 1, 2, 3, 4], &[(&[0, 1, 2], &[3, 4])]));
        assert_eq!(c.rank(), t.rank() - 1);
        assert!(matches!(
            t.collapse_split(split(&[0, 2], &[1, 3, 4])),
            Err(Error::SplitAbsent)
        ));
    }

    #[test]
    fn leq_examples() {
        let q = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        let big = tree(
            &[0, 1, 2, 3, 4],
            &[(&[0, 1], &[2, 3, 4]), (&[0, 1, 2], &[3, 4])],
        );
        assert!(Tree::least().leq(&q));
        assert!(Tree::least().leq(&Tree::least()));
        assert!(q.leq(&big));
        let conflicting = tree(&[0, 1, 2, 3], &[(&[0, 2], &[1, 3])]);
        assert!(!conflicting.leq(&tree(&[0, 1, 2, 3, 4], &[(&[0, 1], &[2, 3, 4])])));
    }

    #[test]
    fn covers_examples() {
        let q = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        assert!(covers(&Tree::least(), &q));
        let five1 = tree(&[0, 1, 2, 3, 4], &[(&[0, 1, 2], &[3, 4])]);
        let five2 = tree(
            &[0, 1, 2, 3, 4],
            &[(&[0, 1], &[2, 3, 4]), (&[0, 1, 2], &[3, 4])],
        );
        assert!(covers(&five1, &five2));
        // the least element is not covered by a rank-2 tree
        assert!(!covers(&Tree::least(), &five1));
        assert!(!covers(&q, &q));
    }

    #[test]
    fn covers_agrees_with_rank_gap_on_small_space() {
        // in a graded order, covering == ordered with rank gap one
        let trees: Vec<Tree> = all_trees(5).unwrap().collect();
        for a in &trees {
            for b in &trees {
                let gap = a != b && a.leq(b) && b.rank() == a.rank() + 1;
                assert_eq!(covers(a, b), gap, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn covering_trees_of_least() {
        let c = covering_trees(&Tree::least(), 5);
        assert_eq!(c.len(), 15); // 3 * C(5,4)
        for t in &c {
            assert!(covers(&Tree::least(), t));
        }
    }

    #[test]
    fn covering_trees_quartet_universe_exhausted() {
        let q = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        assert!(covering_trees(&q, 4).is_empty());
    }

    #[test]
    fn covering_trees_complete_small() {
        // cross-check against the definition over the whole space
        for n in 4..=5 {
            let trees: Vec<Tree> = all_trees(n).unwrap().collect();
            for t in &trees {
                let mut expect: Vec<Tree> = trees
                    .iter()
                    .filter(|u| covers(t, u))
                    .cloned()
                    .collect();
                expect.sort_unstable();
                assert_eq!(covering_trees(t, n), expect, "covers of {t:?}");
            }
        }
    }

    #[test]
    fn covered_trees_examples() {
        let q = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        assert_eq!(covered_trees(&q), vec![Tree::least()]);
        for n in 4..=5 {
            let trees: Vec<Tree> = all_trees(n).unwrap().collect();
            for t in trees.iter().filter(|t| !t.is_least()) {
                let mut expect: Vec<Tree> =
                    trees.iter().filter(|u| covers(u, t)).cloned().collect();
                expect.sort_unstable();
                assert_eq!(covered_trees(t), expect, "covered of {t:?}");
            }
        }
    }

    #[test]
    fn census_small() {
        // frozen from an independent enumeration: sum over leaf subsets of
        // the published counts of multifurcating topologies per leaf count
        // (3, 25, 235, 2751 for 4..=7 leaves), plus the least element
        assert_eq!(all_trees(4).unwrap().count(), 4);
        assert_eq!(all_trees(5).unwrap().count(), 41);
        assert_eq!(all_trees(6).unwrap().count(), 431);
        let per_size = [3usize, 25, 235, 2751];
        let choose = |n: usize, k: usize| -> usize {
            let mut r = 1usize;
            for i in 0..k {
                r = r * (n - i) / (i + 1);
            }
            r
        };
        for n in 4..=6 {
            let expect: usize = 1 + (4..=n).map(|k| choose(n, k) * per_size[k - 4]).sum::<usize>();
            assert_eq!(all_trees(n).unwrap().count(), expect);
        }
    }

    #[test]
    fn census_emits_unique_canonical_trees() {
        let trees: Vec<Tree> = all_trees(6).unwrap().collect();
        let mut dedup = trees.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(trees.len(), dedup.len());
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(
            all_trees(9),
            Err(Error::UniverseTooLarge(9, 8))
        ));
    }

    #[test]
    fn features_examples() {
        assert!(Tree::least().features().is_empty());
        let q = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        let f = q.features();
        assert_eq!(f.len(), 5);
        assert_eq!(f.iter().filter(|x| x.kind() == "leaf").count(), 4);
        for t in all_trees(5).unwrap() {
            if !t.is_least() {
                assert_eq!(t.features().len() as u32, t.rank() + 4);
            }
        }
    }

    #[test]
    fn separating_subsets_on_caterpillar() {
        let t = tree(
            &[0, 1, 2, 3, 4],
            &[(&[0, 1], &[2, 3, 4]), (&[0, 1, 2], &[3, 4])],
        );
        let u1 = separating_leaf_subsets(&t, split(&[0, 1], &[2, 3, 4])).unwrap();
        assert_eq!(u1, vec![leafset(&[2])]);
        let u2 = separating_leaf_subsets(&t, split(&[0, 1, 2], &[3, 4])).unwrap();
        assert_eq!(u2, vec![leafset(&[2])]);
    }

    #[test]
    fn separating_subsets_quartet_empty() {
        let q = tree(&[0, 1, 2, 3], &[(&[0, 1], &[2, 3])]);
        assert!(separating_leaf_subsets(&q, split(&[0, 1], &[2, 3]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn interval_density_small() {
        // comparable pairs with rank gap >= 2 always admit an intermediate
        let trees: Vec<Tree> = all_trees(5).unwrap().collect();
        for a in &trees {
            for b in &trees {
                if a != b && a.leq(b) && b.rank() > a.rank() + 1 {
                    let found = trees
                        .iter()
                        .any(|z| z != a && z != b && a.leq(z) && z.leq(b));
                    assert!(found, "no intermediate between {a:?} and {b:?}");
                }
            }
        }
    }
}
