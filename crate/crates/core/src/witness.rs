use serde::{Deserialize, Serialize};

/// Certificate that a family fails a covering property. Every variant carries
/// enough data to re-check the failure by hand; `detail` explains it round by
/// round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// A vertex subset whose cycle (in the listed cyclic `ordering`) is not
    /// directed in any round.
    UncycledSubset {
        vertices: Vec<usize>,
        ordering: Vec<usize>,
        detail: Vec<String>,
    },
    /// An `r`-subset whose facets are consistent in no round.
    InconsistentSimplex {
        vertices: Vec<usize>,
        detail: Vec<String>,
    },
    /// Indices of `k` member sets and a membership pattern (`true` = inside
    /// the set, `false` = inside its complement) whose intersection is empty.
    MissingIntersectionPattern {
        sets: Vec<usize>,
        pattern: Vec<bool>,
        detail: Vec<String>,
    },
    /// `center` sees the same per-round direction sequence on its edges to
    /// every vertex of `neighbors`.
    DuplicateLocalSequence {
        center: usize,
        neighbors: Vec<usize>,
        sequence: String,
        detail: Vec<String>,
    },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::UncycledSubset { .. } => "UncycledSubset",
            Witness::InconsistentSimplex { .. } => "InconsistentSimplex",
            Witness::MissingIntersectionPattern { .. } => "MissingIntersectionPattern",
            Witness::DuplicateLocalSequence { .. } => "DuplicateLocalSequence",
        }
    }

    /// The offending vertex subset (sorted) for the graph and simplex kinds;
    /// the member indices for the set-family kind.
    pub fn subset(&self) -> Vec<usize> {
        match self {
            Witness::UncycledSubset { vertices, .. }
            | Witness::InconsistentSimplex { vertices, .. } => vertices.clone(),
            Witness::MissingIntersectionPattern { sets, .. } => sets.clone(),
            Witness::DuplicateLocalSequence {
                center, neighbors, ..
            } => {
                let mut v = neighbors.clone();
                v.push(*center);
                v.sort_unstable();
                v
            }
        }
    }

    pub fn detail(&self) -> &[String] {
        match self {
            Witness::UncycledSubset { detail, .. }
            | Witness::InconsistentSimplex { detail, .. }
            | Witness::MissingIntersectionPattern { detail, .. }
            | Witness::DuplicateLocalSequence { detail, .. } => detail,
        }
    }
}
