//! Taxon interning and leaf-id sets.
//!
//! Every run interns taxon names once into a [`Universe`]; trees then carry
//! only dense integer ids packed into [`LeafSet`] bit vectors, so all the set
//! algebra the poset operations need is single-word work.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on distinct taxa per run, set by the `u128` backing of [`LeafSet`].
pub const MAX_TAXA: usize = 128;

/// Dense index of a taxon within a [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafId(pub u32);

impl LeafId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Write-once bijection between taxon names and dense leaf ids.
#[derive(Debug, Clone, Default)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, LeafId>,
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut u = Self::new();
        for n in names {
            u.intern(n.as_ref())?;
        }
        Ok(u)
    }

    /// Look up `name`, inserting it with the next free id if unseen.
    pub fn intern(&mut self, name: &str) -> Result<LeafId> {
        if let Some(&id) = self.index.get(name) {
            return Ok(id);
        }
        if self.names.len() >= MAX_TAXA {
            return Err(Error::TooManyTaxa(self.names.len() + 1, MAX_TAXA));
        }
        let id = LeafId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn get(&self, name: &str) -> Option<LeafId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: LeafId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// The full leaf set 0..len.
    pub fn all_leaves(&self) -> LeafSet {
        LeafSet::full(self.len())
    }
}

/// Set of leaf ids over one universe, packed into a `u128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LeafSet(u128);

impl LeafSet {
    pub const EMPTY: LeafSet = LeafSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_TAXA);
        if n == 0 {
            LeafSet(0)
        } else if n == MAX_TAXA {
            LeafSet(u128::MAX)
        } else {
            LeafSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(id: LeafId) -> Self {
        LeafSet(1u128 << id.0)
    }

    pub fn insert(&mut self, id: LeafId) {
        self.0 |= 1u128 << id.0;
    }

    pub fn remove(&mut self, id: LeafId) {
        self.0 &= !(1u128 << id.0);
    }

    pub fn contains(self, id: LeafId) -> bool {
        self.0 & (1u128 << id.0) != 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: LeafSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: LeafSet) -> LeafSet {
        LeafSet(self.0 | other.0)
    }

    pub fn intersect(self, other: LeafSet) -> LeafSet {
        LeafSet(self.0 & other.0)
    }

    pub fn minus(self, other: LeafSet) -> LeafSet {
        LeafSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: LeafSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn min_leaf(self) -> Option<LeafId> {
        if self.0 == 0 {
            None
        } else {
            Some(LeafId(self.0.trailing_zeros()))
        }
    }

    pub fn iter(self) -> LeafIter {
        LeafIter(self.0)
    }

    pub fn from_ids<I: IntoIterator<Item = LeafId>>(ids: I) -> Self {
        let mut s = LeafSet::EMPTY;
        for id in ids {
            s.insert(id);
        }
        s
    }
}

impl FromIterator<LeafId> for LeafSet {
    fn from_iter<I: IntoIterator<Item = LeafId>>(iter: I) -> Self {
        LeafSet::from_ids(iter)
    }
}

/// Ascending iteration over member ids.
pub struct LeafIter(u128);

impl Iterator for LeafIter {
    type Item = LeafId;

    fn next(&mut self) -> Option<LeafId> {
        if self.0 == 0 {
            return None;
        }
        let id = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(LeafId(id))
    }
}

// Lexicographic order on the ascending element sequence, so {0,5} < {0,7}
// and {1} < {1,2}. This is the tie-break order used by every deterministic
// enumeration in the crate.
impl Ord for LeafSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        // the sequences agree below the lowest differing element m; the set
        // holding m sorts first unless the other set has nothing after the
        // shared prefix (a strict prefix sorts first)
        let diff = self.0 ^ other.0;
        let m = diff & diff.wrapping_neg();
        let above = !(m | (m - 1));
        if self.0 & m != 0 {
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for LeafSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LeafSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for id in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}", id.0)?;
            first = false;
        }
        write!(f, "}}")
    }
}

impl LeafSet {
    /// Render as comma-separated taxon names in id order.
    pub fn display(&self, u: &Universe) -> String {
        self.iter()
            .map(|id| u.name(id).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intern_is_bijective() {
        let mut u = Universe::new();
        let a = u.intern("A").unwrap();
        let b = u.intern("B").unwrap();
        assert_eq!(u.intern("A").unwrap(), a);
        assert_eq!(a, LeafId(0));
        assert_eq!(b, LeafId(1));
        assert_eq!(u.name(a), "A");
        assert_eq!(u.get("B"), Some(b));
        assert_eq!(u.len(), 2);
    }

    #[test]
    fn too_many_taxa_rejected() {
        let mut u = Universe::new();
        for i in 0..MAX_TAXA {
            u.intern(&format!("t{i}")).unwrap();
        }
        assert!(matches!(u.intern("overflow"), Err(Error::TooManyTaxa(..))));
    }

    #[test]
    fn set_algebra() {
        let s = LeafSet::from_ids([LeafId(0), LeafId(3), LeafId(5)]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(LeafId(3)));
        assert!(!s.contains(LeafId(1)));
        assert_eq!(s.min_leaf(), Some(LeafId(0)));
        let t = LeafSet::from_ids([LeafId(3)]);
        assert!(t.is_subset_of(s));
        assert_eq!(s.minus(t).len(), 2);
        assert_eq!(
            s.iter().collect::<Vec<_>>(),
            vec![LeafId(0), LeafId(3), LeafId(5)]
        );
    }

    #[test]
    fn lexicographic_order() {
        let mk = |ids: &[u32]| LeafSet::from_ids(ids.iter().map(|&i| LeafId(i)));
        assert!(mk(&[0, 5]) < mk(&[0, 7]));
        assert!(mk(&[1]) < mk(&[1, 2]));
        assert!(mk(&[0]) < mk(&[1]));
        assert!(mk(&[1, 2]) > mk(&[1]));
        // later shared elements do not rescue a larger first difference
        assert!(mk(&[1, 2, 3]) < mk(&[1, 3]));
        assert!(mk(&[0, 3]) > mk(&[0, 1, 3]));
        assert_eq!(mk(&[2, 4]).cmp(&mk(&[2, 4])), std::cmp::Ordering::Equal);
    }

    #[test]
    fn order_is_total_on_small_sets() {
        // transitivity over every triple of subsets of {0..5}
        let sets: Vec<LeafSet> = (0u32..64)
            .map(|mask| {
                LeafSet::from_ids((0..6).filter(|i| mask & (1 << i) != 0).map(LeafId))
            })
            .collect();
        let mut sorted = sets.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            assert!(w[0] < w[1]);
        }
        // agreement with explicit sequence comparison
        for a in &sets {
            for b in &sets {
                let sa: Vec<u32> = a.iter().map(|i| i.0).collect();
                let sb: Vec<u32> = b.iter().map(|i| i.0).collect();
                assert_eq!(a.cmp(b), sa.cmp(&sb), "{a:?} vs {b:?}");
            }
        }
    }
}
