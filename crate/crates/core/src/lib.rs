//! Rainbow matchings in edge-coloured graphs.
//!
//! - [`graph`]: the edge-coloured graph type and colour-degree statistics.
//! - [`adapter`]: (C, ℓ)-adapters and their three constructions.
//! - [`extend`]: rainbow matchings of size k under minimum colour degree k.
//! - [`decompose`]: edge-decomposition into ⌊tn/2⌋ rainbow matchings when
//!   every colour class has maximum degree at most t.
//! - [`oracle`]: exact reference algorithms.
//! - [`genlab`]: seeded generators and the verification harness.

pub mod adapter;
pub mod decompose;
pub mod ecg;
pub mod extend;
pub mod genlab;
pub mod graph;
pub mod oracle;

pub use graph::{Colour, ColourSet, Edge, EdgeColouredGraph, GraphError, Matching, Vertex, VertexSet};
