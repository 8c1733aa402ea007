//! Graph and matrix representations.
//!
//! Every state is a [`BinaryMatrix`]: the bi-adjacency matrix of a bipartite
//! graph, or the zero-diagonal adjacency matrix of a simple undirected or
//! directed graph.

mod canon;
mod degrees;
mod groups;
mod matrix;
mod stats;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use canon::{canonical_form, canonical_form_with_limit, DEFAULT_SEARCH_LIMIT};
pub use degrees::{realize, validate, DegreeSequence, Side, Violation};
pub(crate) use degrees::{erdos_gallai_failure, gale_ryser_failure};
pub use groups::{apply_relabelling, degree_groups, relabel_nodes, NodePartition};
pub use matrix::BinaryMatrix;
pub use stats::{is_connected, triangle_count};

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Bipartite,
    /// Simple undirected graph: symmetric adjacency matrix, zero diagonal.
    #[serde(alias = "undirected-simple")]
    Undirected,
    /// Simple directed graph: zero diagonal, no further constraint.
    #[serde(alias = "directed-simple")]
    Directed,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Bipartite => "bipartite",
            GraphKind::Undirected => "undirected",
            GraphKind::Directed => "directed",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "bipartite" => Ok(GraphKind::Bipartite),
            "undirected" | "undirected-simple" => Ok(GraphKind::Undirected),
            "directed" | "directed-simple" => Ok(GraphKind::Directed),
            other => Err(Error::Parse(format!("unknown graph kind `{other}`"))),
        }
    }
}
