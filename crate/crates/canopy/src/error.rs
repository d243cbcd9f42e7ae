//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("splits are pairwise incompatible and cannot form a tree")]
    IncompatibleSplits,

    #[error("split does not bipartition the declared leaf set")]
    MalformedSplit,

    #[error("leaf is not present in the tree")]
    LeafAbsent,

    #[error("split is not present in the tree")]
    SplitAbsent,

    #[error("the two trees do not form a covering pair")]
    NotCoveringPair,

    #[error("universe of {0} leaves exceeds the exhaustive-enumeration guard of {1}")]
    UniverseTooLarge(usize, usize),

    #[error("too many taxa: {0} exceeds the supported maximum of {1}")]
    TooManyTaxa(usize, usize),

    #[error("sample set is empty")]
    EmptySample,

    #[error("step limit of {0} rounds exceeded")]
    StepLimitExceeded(usize),

    #[error("duplicate leaf label '{0}'")]
    DuplicateLeaf(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{path}: {} bad line(s): {}", .lines.len(), format_lines(.lines))]
    ParseLines {
        path: String,
        lines: Vec<(usize, String)>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_lines(lines: &[(usize, String)]) -> String {
    lines
        .iter()
        .map(|(n, m)| format!("line {n}: {m}"))
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
