//! Newick parsing and serialization, and conversion between rooted parse
//! trees and canonical unrooted topologies.
//!
//! The parser accepts the standard grammar: nested parentheses, optional
//! internal labels, optional `:length` annotations, quoted labels with `''`
//! escapes, and polytomies. Lengths and internal labels are parsed and then
//! discarded on conversion to a topology, so files produced by the usual
//! inference tools ingest cleanly.

use std::fmt::Write as _;
use std::path::Path;

use crate::consensus::SampleSet;
use crate::error::{Error, Result};
use crate::tree::{Split, Tree};
use crate::universe::{LeafSet, Universe};

/// Rooted tree as parsed: arena of nodes with parent links.
#[derive(Debug, Clone, Default)]
pub struct RootedParseTree {
    pub nodes: Vec<ParseNode>,
    pub root: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ParseNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub label: Option<String>,
    pub length: Option<f64>,
}

impl RootedParseTree {
    pub fn new_node(&mut self, parent: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(ParseNode {
            parent,
            ..Default::default()
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        id
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn leaf_labels(&self) -> impl Iterator<Item = (usize, &str)> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.children.is_empty())
            .map(|(i, n)| (i, n.label.as_deref().unwrap_or("")))
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn subtree(&mut self, tree: &mut RootedParseTree, parent: Option<usize>) -> Result<usize> {
        self.skip_ws();
        let node = tree.new_node(parent);
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                self.subtree(tree, Some(node))?;
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => {
                        return self.err(format!(
                            "expected ',' or ')', found '{}'",
                            c as char
                        ))
                    }
                    None => return self.err("expected ',' or ')', found end of input"),
                }
            }
            tree.nodes[node].label = self.label()?;
        } else {
            match self.label()? {
                Some(l) => tree.nodes[node].label = Some(l),
                None => return self.err("expected a leaf label or '('"),
            }
        }
        self.skip_ws();
        if self.peek() == Some(b':') {
            self.pos += 1;
            tree.nodes[node].length = Some(self.number()?);
        }
        Ok(node)
    }

    fn label(&mut self) -> Result<Option<String>> {
        self.skip_ws();
        match self.peek() {
            Some(b'\'') => {
                self.pos += 1;
                let mut out = String::new();
                loop {
                    match self.peek() {
                        Some(b'\'') => {
                            // '' is an escaped quote
                            if self.bytes.get(self.pos + 1) == Some(&b'\'') {
                                out.push('\'');
                                self.pos += 2;
                            } else {
                                self.pos += 1;
                                break;
                            }
                        }
                        Some(c) => {
                            out.push(c as char);
                            self.pos += 1;
                        }
                        None => return self.err("unterminated quoted label"),
                    }
                }
                Ok(Some(out))
            }
            _ => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if b"(),:;[]'".contains(&c) || c.is_ascii_whitespace() {
                        break;
                    }
                    self.pos += 1;
                }
                if self.pos == start {
                    Ok(None)
                } else {
                    Ok(Some(
                        std::str::from_utf8(&self.bytes[start..self.pos])
                            .map_err(|_| Error::Parse {
                                offset: start,
                                message: "label is not valid UTF-8".into(),
                            })?
                            .to_string(),
                    ))
                }
            }
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || b"+-.eE".contains(&c) {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return self.err("expected a branch length");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Parse {
                offset: start,
                message: "invalid branch length".into(),
            })
    }
}

/// Parse one `;`-terminated Newick statement.
pub fn parse_newick(text: &str) -> Result<RootedParseTree> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut tree = RootedParseTree::default();
    p.subtree(&mut tree, None)?;
    p.skip_ws();
    if p.peek() != Some(b';') {
        return p.err("expected ';'");
    }
    p.pos += 1;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.err("trailing content after ';'");
    }
    tree.root = 0;
    for (i, n) in tree.nodes.iter().enumerate() {
        if n.children.is_empty() && n.label.as_deref().unwrap_or("").is_empty() {
            return Err(Error::Parse {
                offset: 0,
                message: format!("leaf node {i} has no label"),
            });
        }
    }
    Ok(tree)
}

/// Convert a rooted parse tree to a canonical unrooted topology, interning
/// any new leaf labels into `universe`. Lengths and internal labels are
/// dropped; a degree-two root vanishes on its own because complementary
/// splits are identified.
pub fn to_topology(rt: &RootedParseTree, universe: &mut Universe) -> Result<Tree> {
    let mut leaves = LeafSet::EMPTY;
    let mut leaf_ids: Vec<Option<crate::universe::LeafId>> = vec![None; rt.nodes.len()];
    for (i, label) in rt.leaf_labels() {
        let id = universe.intern(label)?;
        if leaves.contains(id) {
            return Err(Error::DuplicateLeaf(label.to_string()));
        }
        leaves.insert(id);
        leaf_ids[i] = Some(id);
    }

    // cluster below each node, in one postorder pass
    let mut below: Vec<LeafSet> = vec![LeafSet::EMPTY; rt.nodes.len()];
    let mut order: Vec<usize> = Vec::with_capacity(rt.nodes.len());
    let mut stack = vec![rt.root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(&rt.nodes[v].children);
    }
    for &v in order.iter().rev() {
        below[v] = match leaf_ids[v] {
            Some(id) => LeafSet::singleton(id),
            None => rt.nodes[v]
                .children
                .iter()
                .fold(LeafSet::EMPTY, |acc, &c| acc.union(below[c])),
        };
    }

    let mut splits: Vec<Split> = Vec::new();
    for v in 0..rt.nodes.len() {
        if v == rt.root {
            continue;
        }
        let a = below[v];
        let b = leaves.minus(a);
        if a.len() >= 2 && b.len() >= 2 {
            splits.push(Split::new(a, b));
        }
    }
    Tree::canonicalize(leaves, splits)
}

/// Quote a taxon name when the bare grammar cannot carry it.
fn quoted(name: &str) -> String {
    let needs = name.is_empty()
        || name
            .bytes()
            .any(|c| b"(),:;[]' \t\n".contains(&c));
    if needs {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

/// Deterministic Newick form of a non-least topology: rooted on the edge of
/// the canonically smallest split, children ordered by minimum leaf id.
/// Parse-write-parse is the identity on topologies.
pub fn write_newick(t: &Tree, u: &Universe) -> String {
    assert!(!t.is_least(), "the least element needs a declared leaf list");
    let first = t.splits()[0];
    let mut out = String::new();
    out.push('(');
    write_side(&mut out, t, first.side_a(), u);
    out.push(',');
    write_side(&mut out, t, first.side_b(), u);
    out.push_str(");");
    out
}

/// Star tree over an explicit leaf list (serialization of the least element
/// in a context that knows its taxa).
pub fn write_star(leaves: LeafSet, u: &Universe) -> String {
    let names: Vec<String> = leaves.iter().map(|id| quoted(u.name(id))).collect();
    format!("({});", names.join(","))
}

fn write_side(out: &mut String, t: &Tree, side: LeafSet, u: &Universe) {
    // split halves strictly inside `side`; compatibility makes them laminar
    let inner: Vec<LeafSet> = t
        .splits()
        .iter()
        .filter_map(|s| {
            [s.side_a(), s.side_b()]
                .into_iter()
                .find(|half| half.is_subset_of(side) && *half != side)
        })
        .collect();
    write_group(out, side, &inner, u);
}

fn write_group(out: &mut String, group: LeafSet, clusters: &[LeafSet], u: &Universe) {
    // children of this node: maximal clusters plus directly attached leaves
    let maximal: Vec<LeafSet> = clusters
        .iter()
        .copied()
        .filter(|c| !clusters.iter().any(|d| *d != *c && c.is_subset_of(*d)))
        .collect();
    let covered = maximal.iter().fold(LeafSet::EMPTY, |acc, c| acc.union(*c));
    let mut children: Vec<(u32, Option<LeafSet>)> = maximal
        .iter()
        .map(|c| (c.min_leaf().unwrap().0, Some(*c)))
        .collect();
    children.extend(group.minus(covered).iter().map(|id| (id.0, None)));
    children.sort_unstable_by_key(|(k, _)| *k);

    out.push('(');
    for (i, (key, cluster)) in children.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        match cluster {
            None => out.push_str(&quoted(u.name(crate::universe::LeafId(*key)))),
            Some(c) => {
                let nested: Vec<LeafSet> = clusters
                    .iter()
                    .copied()
                    .filter(|d| d.is_subset_of(*c) && *d != *c)
                    .collect();
                write_group(out, *c, &nested, u);
            }
        }
    }
    out.push(')');
}

/// Read a sample file: one Newick statement per line, `#` comments and
/// blank lines ignored. All trees share one universe built in file order.
pub fn read_sample_file(path: &Path) -> Result<SampleSet> {
    let text = std::fs::read_to_string(path)?;
    read_samples(&text).map_err(|e| match e {
        Error::ParseLines { lines, .. } => Error::ParseLines {
            path: path.display().to_string(),
            lines,
        },
        other => other,
    })
}

/// As [`read_sample_file`] on in-memory text.
pub fn read_samples(text: &str) -> Result<SampleSet> {
    let mut universe = Universe::new();
    let mut trees = Vec::new();
    let mut bad: Vec<(usize, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_newick(line).and_then(|rt| to_topology(&rt, &mut universe)) {
            Ok(t) => trees.push(t),
            Err(e) => bad.push((i + 1, e.to_string())),
        }
    }
    if !bad.is_empty() {
        return Err(Error::ParseLines {
            path: String::new(),
            lines: bad,
        });
    }
    SampleSet::new(universe, trees)
}

/// Stability table as TSV: `feature  kind  stability  exact`, the exact
/// column over the sample count as denominator.
pub fn write_scores(report: &crate::consensus::StabilityReport, u: &Universe) -> String {
    let mut out = String::from("feature\tkind\tstability\texact\n");
    let n = report.sample_count as u64;
    for e in &report.entries {
        let v = *e.stability.numer() as f64 / *e.stability.denom() as f64;
        let hits = e.stability.numer() * (n / e.stability.denom());
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}\t{}/{}",
            e.feature.display(u),
            e.feature.kind(),
            v,
            hits,
            n
        );
    }
    out
}
