//! Seeded random topologies for fuzz checks and the `verify` command.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::tree::{Split, Tree};
use crate::universe::{LeafId, LeafSet};

/// Uniform random binary topology on the given leaf ids: start from the
/// three-leaf star and attach each remaining leaf to a uniformly chosen
/// edge of the growing unrooted tree.
pub fn random_binary_tree<R: Rng>(rng: &mut R, leaves: LeafSet) -> Tree {
    let ids: Vec<LeafId> = leaves.iter().collect();
    let n = ids.len();
    assert!(n >= 3);

    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut leaf_of: Vec<Option<LeafId>> = Vec::new();
    let push_node = |adj: &mut Vec<Vec<usize>>, leaf_of: &mut Vec<Option<LeafId>>, l| {
        adj.push(Vec::new());
        leaf_of.push(l);
        adj.len() - 1
    };

    let center = push_node(&mut adj, &mut leaf_of, None);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &id in &ids[..3] {
        let v = push_node(&mut adj, &mut leaf_of, Some(id));
        adj[center].push(v);
        adj[v].push(center);
        edges.push((center, v));
    }

    for &id in &ids[3..] {
        let &(u, v) = edges.choose(rng).unwrap();
        let m = push_node(&mut adj, &mut leaf_of, None);
        let x = push_node(&mut adj, &mut leaf_of, Some(id));
        adj[u].retain(|&w| w != v);
        adj[v].retain(|&w| w != u);
        for (a, b) in [(u, m), (m, v), (m, x)] {
            adj[a].push(b);
            adj[b].push(a);
        }
        edges.retain(|&e| e != (u, v));
        edges.extend([(u, m), (m, v), (m, x)]);
    }

    fn side(adj: &[Vec<usize>], leaf_of: &[Option<LeafId>], from: usize, avoid: usize) -> LeafSet {
        let mut acc = LeafSet::EMPTY;
        let mut stack = vec![(from, avoid)];
        while let Some((v, prev)) = stack.pop() {
            if let Some(id) = leaf_of[v] {
                acc.insert(id);
            }
            for &w in &adj[v] {
                if w != prev {
                    stack.push((w, v));
                }
            }
        }
        acc
    }

    let mut splits = Vec::new();
    for &(u, v) in &edges {
        if leaf_of[u].is_none() && leaf_of[v].is_none() {
            let a = side(&adj, &leaf_of, u, v);
            let b = leaves.minus(a);
            if a.len() >= 2 && b.len() >= 2 {
                splits.push(Split::new(a, b));
            }
        }
    }
    Tree::from_compatible(leaves, splits)
}

/// Random canonical topology over a universe of `universe_size` leaves:
/// a random leaf subset of size >= 4, a uniform binary shape on it, then
/// each split kept independently. Dropping every split yields the least
/// element, so the sampler covers the whole space.
pub fn random_tree<R: Rng>(rng: &mut R, universe_size: usize) -> Tree {
    assert!(universe_size >= 4);
    let k = rng.gen_range(4..=universe_size);
    let mut ids: Vec<u32> = (0..universe_size as u32).collect();
    ids.shuffle(rng);
    let leaves = LeafSet::from_ids(ids[..k].iter().map(|&i| LeafId(i)));
    let binary = random_binary_tree(rng, leaves);
    let kept: Vec<Split> = binary
        .splits()
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.75))
        .collect();
    Tree::from_compatible(leaves, kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_binary_is_fully_resolved() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 4..=9u32 {
            for _ in 0..50 {
                let leaves = LeafSet::from_ids((0..n).map(LeafId));
                let t = random_binary_tree(&mut rng, leaves);
                assert_eq!(t.splits().len() as u32, n - 3);
                assert_eq!(t.rank(), 2 * n - 7);
            }
        }
    }

    #[test]
    fn random_tree_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let t = random_tree(&mut rng, 7);
            if !t.is_least() {
                assert!(t.leaves().len() >= 4);
                let again =
                    Tree::canonicalize(t.leaves(), t.splits().iter().copied()).unwrap();
                assert_eq!(t, again);
            }
        }
    }

    #[test]
    fn leaf_removal_drops_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 1000 {
            let t = random_tree(&mut rng, 7);
            if t.is_least() {
                continue;
            }
            for a in t.leaves().iter() {
                let r = t.remove_leaf(a).unwrap();
                assert!(r.rank() <= t.rank() - 1);
                assert!(r.leq(&t));
            }
            checked += 1;
        }
    }

    #[test]
    fn attachment_covers_all_quartet_shapes() {
        // 3 shapes on 4 leaves, each should appear from a uniform sampler
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let leaves = LeafSet::from_ids((0..4).map(LeafId));
        let mut seen = std::collections::HashSet::new();
        for _ in 0..200 {
            seen.insert(random_binary_tree(&mut rng, leaves));
        }
        assert_eq!(seen.len(), 3);
    }
}
