//! The line-oriented `.ecg` graph format.
//!
//! ```text
//! ecg 1
//! n <vertex-count>
//! e <u> <v> <colour>
//! ...
//! ```
//!
//! Everything after a `#` on a line is ignored, as are blank lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Edge, EdgeColouredGraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcgError {
    #[error("line {line}: expected header `ecg 1`")]
    BadMagic { line: usize },
    #[error("line {line}: expected `n <vertex-count>`")]
    MissingVertexCount { line: usize },
    #[error("line {line}: malformed record `{text}`")]
    Malformed { line: usize, text: String },
    #[error("missing header")]
    Truncated,
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

pub fn parse(text: &str) -> Result<EdgeColouredGraph, EcgError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, magic) = lines.next().ok_or(EcgError::Truncated)?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["ecg", "1"] {
        return Err(EcgError::BadMagic { line });
    }

    let (line, header) = lines.next().ok_or(EcgError::Truncated)?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => count.parse::<usize>().map_err(|_| EcgError::MissingVertexCount { line })?,
        _ => return Err(EcgError::MissingVertexCount { line }),
    };

    let mut edges = Vec::new();
    for (line, record) in lines {
        let malformed = || EcgError::Malformed { line, text: record.to_string() };
        match record.split_whitespace().collect::<Vec<_>>()[..] {
            ["e", u, v, c] => {
                let u = u.parse().map_err(|_| malformed())?;
                let v = v.parse().map_err(|_| malformed())?;
                let c = c.parse().map_err(|_| malformed())?;
                edges.push(Edge::new(u, v, c));
            }
            _ => return Err(malformed()),
        }
    }
    Ok(EdgeColouredGraph::new(n, edges)?)
}

/// Canonical serialization: edges in ascending endpoint order, `u < v`.
pub fn write(g: &EdgeColouredGraph) -> String {
    let mut out = String::with_capacity(16 + 16 * g.edge_count());
    out.push_str("ecg 1\n");
    let _ = writeln!(out, "n {}", g.n());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.colour);
    }
    out
}
