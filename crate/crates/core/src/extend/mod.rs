//! Finding rainbow matchings of size k under colour-degree conditions.
//!
//! [`general_extend`] and [`bipartite_extend`] turn a rainbow matching of
//! size k−1 into a rainbow matching of size k−1 plus one disjoint edge.
//! [`find_rainbow_matching`] drives the adapter-based partition
//! improvement that upgrades this to a rainbow matching of size k.

mod driver;
mod lemmas;
mod threshold;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, GraphError, Matching, Vertex};

pub use driver::{
    find_rainbow_matching, find_rainbow_matching_traced, theorem1, theorem1_traced, theorem2, theorem2_traced, Action,
    PartitionState, TraceRecord,
};
pub use lemmas::{bipartite_extend, extend_dispatch, general_extend};
pub use threshold::{lemma_vertex_bound, parse_rational, theorem2_vertex_bound, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    General,
    Bipartite,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "general" => Ok(Family::General),
            "bipartite" => Ok(Family::Bipartite),
            other => Err(format!("unknown graph family `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendError {
    #[error("too few vertices: {0}")]
    TooFewVertices(String),
    #[error("vertex {vertex} has colour degree {degree} < {required}")]
    ColourDegree { vertex: Vertex, degree: usize, required: usize },
    #[error("invalid input matching: {0}")]
    InvalidMatching(String),
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl ExtendError {
    /// True for every variant except internal-invariant failures.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, ExtendError::Internal(_))
    }
}

/// A rainbow matching of size k−1 and an edge disjoint from it. The edge's
/// colour may repeat one of the matching's colours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionResult {
    pub matching: Matching,
    pub edge: Edge,
}

impl ExtensionResult {
    pub fn is_valid(&self, g: &crate::graph::EdgeColouredGraph, k: usize) -> bool {
        self.matching.len() + 1 == k
            && g.is_rainbow_matching(&self.matching).unwrap_or(false)
            && g.contains_edge(&self.edge)
            && !self.matching.covers(self.edge.u)
            && !self.matching.covers(self.edge.v)
    }
}
