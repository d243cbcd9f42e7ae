//! Consensus trees from collections of leaf-labeled unrooted trees.
//!
//! The crate organizes all topologies over a taxon set (any leaf subset,
//! any resolution) into a graded partial order, measures similarity between
//! two trees as the rank of their largest common subtree, and builds on
//! that to provide:
//!
//! - per-feature (leaf and edge) stability scores against a sample of trees,
//! - a greedy stable-consensus estimator,
//! - discovery accounting (true/false discoveries against a reference) and
//!   a selection procedure that controls the false discovery rate via
//!   sample splitting and a restricted search DAG,
//! - a multispecies-coalescent gene-tree simulator for end-to-end
//!   experiments, and
//! - Newick parsing/serialization plus a command-line pipeline (`canopy`).

pub mod consensus;
pub mod error;
pub mod fdr;
pub mod msc;
pub mod newick;
pub mod pipeline;
pub mod sampling;
pub mod similarity;
pub mod subposet;
pub mod tree;
pub mod universe;

pub use error::{Error, Result};
pub use tree::{covered_trees, covering_trees, covers, splits_compatible, Feature, Split, Tree};
pub use universe::{LeafId, LeafSet, Universe};

/// Exact rational used for every stability/score value and threshold
/// comparison, so results at a boundary like 85/100 never depend on float
/// rounding.
pub type Rational = num_rational::Ratio<u64>;

/// Parse a decimal or `p/q` string into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::InvalidParameter(format!("not a rational: '{s}'"));
    if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| err())?;
        let q: u64 = q.trim().parse().map_err(|_| err())?;
        if q == 0 {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| err())? };
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let num: u64 = frac.parse().map_err(|_| err())?;
        let den = 10u64.pow(frac.len() as u32);
        return Ok(Rational::from_integer(int) + Rational::new(num, den));
    }
    let int: u64 = s.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(int))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.85").unwrap(), Rational::new(17, 20));
        assert_eq!(parse_rational("17/20").unwrap(), Rational::new(17, 20));
        assert_eq!(parse_rational("1").unwrap(), Rational::from_integer(1));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1, 2));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
