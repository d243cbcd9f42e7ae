//! Feature stability against a sample of trees, and the greedy
//! stable-consensus estimator.
//!
//! The stability of a leaf (edge) of a tree `t` is the fraction of samples
//! whose similarity to `t` strictly drops when that leaf is removed (edge
//! collapsed). A tree is stable at threshold `alpha` when every one of its
//! features reaches `alpha`. All values are exact rationals with the sample
//! count as denominator, so threshold comparisons never hinge on float
//! rounding.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::similarity::RhoCache;
use crate::tree::{covering_trees, covers, Feature, Tree};
use crate::universe::{LeafId, Universe};
use crate::Rational;

/// Ordered, immutable collection of tree samples over one universe.
///
/// Distinct topologies are deduplicated with multiplicities internally;
/// every per-sample count is weighted, so the arithmetic matches iterating
/// the raw list.
#[derive(Debug, Clone)]
pub struct SampleSet {
    universe: Universe,
    trees: Vec<Tree>,
    distinct: Vec<(Tree, usize)>,
}

impl SampleSet {
    pub fn new(universe: Universe, trees: Vec<Tree>) -> Result<SampleSet> {
        if trees.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut sorted = trees.clone();
        sorted.sort_unstable();
        let mut distinct: Vec<(Tree, usize)> = Vec::new();
        for t in sorted {
            match distinct.last_mut() {
                Some((u, n)) if *u == t => *n += 1,
                _ => distinct.push((t, 1)),
            }
        }
        Ok(SampleSet {
            universe,
            trees,
            distinct,
        })
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn distinct(&self) -> &[(Tree, usize)] {
        &self.distinct
    }

    /// Weighted count of samples satisfying `pred`, as a fraction of the
    /// sample size.
    pub fn fraction<F: Fn(&Tree) -> bool + Sync>(&self, pred: F) -> Rational {
        let hits: usize = self
            .distinct
            .par_iter()
            .map(|(t, n)| if pred(t) { *n } else { 0 })
            .sum();
        Rational::new(hits as u64, self.trees.len() as u64)
    }

    /// Split into two disjoint sample sets by index (first `n1`, rest).
    pub fn split_at(&self, n1: usize) -> Result<(SampleSet, SampleSet)> {
        if n1 == 0 || n1 >= self.trees.len() {
            return Err(Error::InvalidParameter(format!(
                "split point {n1} outside 1..{}",
                self.trees.len()
            )));
        }
        let d1 = SampleSet::new(self.universe.clone(), self.trees[..n1].to_vec())?;
        let d2 = SampleSet::new(self.universe.clone(), self.trees[n1..].to_vec())?;
        Ok((d1, d2))
    }
}

/// Fraction of samples whose similarity strictly drops when `a` is removed.
pub fn leaf_stability(
    a: LeafId,
    t: &Tree,
    d: &SampleSet,
    cache: &RhoCache,
) -> Result<Rational> {
    let without = t.remove_leaf(a)?;
    Ok(d.fraction(|s| cache.value(&without, s) < cache.value(t, s)))
}

/// Fraction of samples whose similarity strictly drops when `e` is
/// collapsed.
pub fn edge_stability(
    e: crate::tree::Split,
    t: &Tree,
    d: &SampleSet,
    cache: &RhoCache,
) -> Result<Rational> {
    let without = t.collapse_split(e)?;
    Ok(d.fraction(|s| cache.value(&without, s) < cache.value(t, s)))
}

pub fn feature_stability(
    f: Feature,
    t: &Tree,
    d: &SampleSet,
    cache: &RhoCache,
) -> Result<Rational> {
    match f {
        Feature::Leaf(a) => leaf_stability(a, t, d, cache),
        Feature::Edge(e) => edge_stability(e, t, d, cache),
    }
}

/// Per-feature stability table for one tree, in canonical feature order.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub entries: Vec<StabilityEntry>,
    /// Denominator of every entry.
    pub sample_count: usize,
}

#[derive(Debug, Clone)]
pub struct StabilityEntry {
    pub feature: Feature,
    pub stability: Rational,
}

impl StabilityReport {
    pub fn for_tree(t: &Tree, d: &SampleSet, cache: &RhoCache) -> Result<StabilityReport> {
        let features = t.features();
        let entries: Vec<StabilityEntry> = features
            .par_iter()
            .map(|&f| {
                feature_stability(f, t, d, cache).map(|stability| StabilityEntry {
                    feature: f,
                    stability,
                })
            })
            .collect::<Result<_>>()?;
        Ok(StabilityReport {
            entries,
            sample_count: d.len(),
        })
    }

    pub fn all_at_least(&self, alpha: Rational) -> bool {
        self.entries.iter().all(|e| e.stability >= alpha)
    }
}

/// True when every feature of `t` has stability at least `alpha`. The
/// least element has no features and is stable vacuously.
pub fn is_alpha_stable(
    t: &Tree,
    d: &SampleSet,
    alpha: Rational,
    cache: &RhoCache,
) -> Result<bool> {
    if t.is_least() {
        return Ok(true);
    }
    // cheapest rejection first: every feature must clear alpha anyway
    for f in t.features() {
        if feature_stability(f, t, d, cache)? < alpha {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Support for the single feature `tv` adds over `tu`: the fraction of
/// samples whose similarity strictly grows. Equals the stability of the
/// added leaf or edge measured in `tv`.
pub fn score(tu: &Tree, tv: &Tree, d: &SampleSet, cache: &RhoCache) -> Result<Rational> {
    if !covers(tu, tv) {
        return Err(Error::NotCoveringPair);
    }
    Ok(d.fraction(|s| cache.value(tu, s) < cache.value(tv, s)))
}

/// How the estimator handles a best candidate that is not stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RemovalMode {
    /// Keep removing the least stable features of the candidate until it
    /// stabilizes (default).
    Cumulative,
    /// Try removing one feature at a time from the unmodified candidate.
    SingleStep,
}

#[derive(Debug, Clone)]
pub struct EstimateOptions {
    pub alpha: Rational,
    /// Round cap; defaults to ten times the maximum rank of the universe.
    pub max_rounds: Option<usize>,
    pub removal: RemovalMode,
}

impl EstimateOptions {
    pub fn new(alpha: Rational) -> Self {
        EstimateOptions {
            alpha,
            max_rounds: None,
            removal: RemovalMode::Cumulative,
        }
    }
}

/// One accepted move of the estimator, for the run trace.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateStep {
    pub round: usize,
    pub chosen: String,
    pub score: String,
    /// "stable" when the candidate passed directly, "removal" when features
    /// were stripped first.
    pub via: String,
    pub removed: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct EstimateOutcome {
    pub tree: Tree,
    pub report: StabilityReport,
    pub trace: Vec<EstimateStep>,
}

/// Greedy stable-consensus estimation.
///
/// Starting from the least element, each round scores all covering trees,
/// takes the best stable one, and otherwise strips the least stable
/// features from the top candidate until it stabilizes. Terminates when no
/// candidate survives, or on a revisited state (the walk can oscillate by
/// re-adding a feature it just removed).
pub fn estimate_stable(
    d: &SampleSet,
    opts: &EstimateOptions,
    cache: &RhoCache,
) -> Result<EstimateOutcome> {
    if opts.alpha <= Rational::new(0, 1) || opts.alpha > Rational::new(1, 1) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0,1], got {}",
            opts.alpha
        )));
    }
    let universe_size = d.universe().len();
    let max_rounds = opts
        .max_rounds
        .unwrap_or_else(|| 10 * (2 * universe_size).saturating_sub(7).max(4));

    let mut current = Tree::least();
    let mut visited = std::collections::HashSet::new();
    visited.insert(current.clone());
    let mut trace = Vec::new();

    for round in 1.. {
        if round > max_rounds {
            return Err(Error::StepLimitExceeded(max_rounds));
        }
        let candidates = ranked_candidates(&current, universe_size, d, cache)?;
        if candidates.is_empty() {
            break;
        }

        let mut accepted: Option<(Tree, Rational, String, Vec<String>)> = None;
        for (cand, sc) in &candidates {
            if is_alpha_stable(cand, d, opts.alpha, cache)? {
                accepted = Some((cand.clone(), *sc, "stable".into(), Vec::new()));
                break;
            }
        }
        if accepted.is_none() {
            // fall back to the top candidate and strip weak features
            let (top, sc) = &candidates[0];
            if let Some((stripped, removed)) =
                strip_to_stability(top, &current, d, opts, cache)?
            {
                accepted = Some((stripped, *sc, "removal".into(), removed));
            }
        }

        match accepted {
            None => break,
            Some((next, sc, via, removed)) => {
                if !visited.insert(next.clone()) {
                    break; // revisited state: stop with the current tree
                }
                trace.push(EstimateStep {
                    round,
                    chosen: next.debug_string(d.universe()),
                    score: sc.to_string(),
                    via,
                    removed,
                });
                current = next;
            }
        }
    }

    let report = StabilityReport::for_tree(&current, d, cache)?;
    debug_assert!(is_alpha_stable(&current, d, opts.alpha, cache)?);
    Ok(EstimateOutcome {
        tree: current,
        report,
        trace,
    })
}

/// Covering candidates of `tu`, scored and sorted best first with canonical
/// tie-breaking.
fn ranked_candidates(
    tu: &Tree,
    universe_size: usize,
    d: &SampleSet,
    cache: &RhoCache,
) -> Result<Vec<(Tree, Rational)>> {
    let covers_list = covering_trees(tu, universe_size);
    let mut scored: Vec<(Tree, Rational)> = covers_list
        .into_par_iter()
        .map(|tv| {
            let s = score(tu, &tv, d, cache)?;
            Ok((tv, s))
        })
        .collect::<Result<_>>()?;
    scored.sort_by(|(ta, sa), (tb, sb)| sb.cmp(sa).then_with(|| ta.cmp(tb)));
    Ok(scored)
}

/// Identify the feature `tv` added over `tu`. Only meaningful for
/// non-least `tu`; the first step from the least element adds a whole
/// quartet at once.
fn added_feature(tu: &Tree, tv: &Tree) -> Feature {
    if tu.leaves() != tv.leaves() {
        let extra = tv.leaves().minus(tu.leaves());
        Feature::Leaf(extra.min_leaf().expect("cover adds one leaf"))
    } else {
        let s = tv
            .splits()
            .iter()
            .copied()
            .find(|s| !tu.has_split(*s))
            .expect("cover adds one split");
        Feature::Edge(s)
    }
}

/// Remove the least stable features of `top` (never the one it just added)
/// until the tree stabilizes. Returns the stabilized tree, or `None` when
/// the candidates run out without reaching stability.
fn strip_to_stability(
    top: &Tree,
    tu: &Tree,
    d: &SampleSet,
    opts: &EstimateOptions,
    cache: &RhoCache,
) -> Result<Option<(Tree, Vec<String>)>> {
    if tu.is_least() {
        // every feature of a quartet candidate was just added; nothing is
        // eligible for removal
        return Ok(None);
    }
    let added = added_feature(tu, top);
    let mut order: Vec<(Rational, Feature)> = Vec::new();
    for f in top.features() {
        if f != added {
            order.push((feature_stability(f, top, d, cache)?, f));
        }
    }
    order.sort_by(|(sa, fa), (sb, fb)| sa.cmp(sb).then_with(|| fa.cmp(fb)));

    let mut stripped = top.clone();
    let mut removed = Vec::new();
    for (_, f) in order {
        let next = match f {
            Feature::Leaf(a) => {
                if !stripped.leaves().contains(a) {
                    continue; // gone already
                }
                stripped.remove_leaf(a)?
            }
            Feature::Edge(s) => {
                if !stripped.has_split(s) {
                    continue; // vanished with an earlier removal
                }
                stripped.collapse_split(s)?
            }
        };
        removed.push(f.display(d.universe()));
        let candidate = match opts.removal {
            RemovalMode::Cumulative => {
                stripped = next;
                stripped.clone()
            }
            RemovalMode::SingleStep => next,
        };
        if is_alpha_stable(&candidate, d, opts.alpha, cache)? {
            return Ok(Some((candidate, removed)));
        }
    }
    Ok(None)
}
