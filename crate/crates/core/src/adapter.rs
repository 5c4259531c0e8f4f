//! (C, ℓ)-adapters: vertex sets carrying ℓ rainbow matchings with colour
//! set exactly C such that every vertex of the set is avoided by at least
//! one of them. Removing any single vertex therefore still leaves a
//! rainbow matching with colours C inside the set.
//!
//! A *C-adapter* is the case ℓ = |C| + 1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Colour, ColourSet, Edge, EdgeColouredGraph, Matching, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdapterError {
    #[error("{pairs} pairs but {zs} pendant vertices")]
    LengthMismatch { pairs: usize, zs: usize },
    #[error("vertex {0} used twice")]
    VertexCollision(Vertex),
    #[error("edge {{{0}, {1}}} is not in the graph")]
    MissingEdge(Vertex, Vertex),
    #[error("colour mismatch: {0} vs {1}")]
    ColourMismatch(Colour, Colour),
    #[error("colour {0} is already present")]
    ColourCollision(Colour),
    #[error("vertex {0} is not in the adapter")]
    NotInAdapter(Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adapter {
    pub vertices: VertexSet,
    pub colours: ColourSet,
    pub witnesses: Vec<Matching>,
}

impl Adapter {
    pub fn level(&self) -> usize {
        self.witnesses.len()
    }

    /// Index of the first witness avoiding `w`.
    pub fn witness_missing(&self, w: Vertex) -> Option<usize> {
        self.witnesses.iter().position(|m| !m.covers(w))
    }

    /// Witness `i`, or the last one when `i` is beyond the level.
    pub fn padded_witness(&self, i: usize) -> &Matching {
        &self.witnesses[i.min(self.witnesses.len() - 1)]
    }

    pub fn verify(&self, g: &EdgeColouredGraph) -> bool {
        verify_adapter(g, &self.vertices, &self.colours, self.level(), &self.witnesses)
    }
}

/// Checks the adapter definition from scratch against `g`.
pub fn verify_adapter(
    g: &EdgeColouredGraph,
    vertices: &VertexSet,
    colours: &ColourSet,
    level: usize,
    witnesses: &[Matching],
) -> bool {
    if level == 0 || witnesses.len() != level {
        return false;
    }
    let witnesses_ok = witnesses.iter().all(|m| {
        g.is_rainbow_matching(m).unwrap_or(false)
            && m.colours() == *colours
            && m.len() == colours.len()
            && m.iter().all(|e| vertices.contains(&e.u) && vertices.contains(&e.v))
    });
    witnesses_ok && vertices.iter().all(|&w| witnesses.iter().any(|m| !m.covers(w)))
}

fn require_edge(g: &EdgeColouredGraph, a: Vertex, b: Vertex) -> Result<Edge, AdapterError> {
    g.edge(a, b).ok_or(AdapterError::MissingEdge(a, b))
}

/// Builds the C-adapter on `{x_i, y_i, z_i, w}` from edges `x_i y_i` and
/// `z_i w` that share colour `c_i`, with the `c_i` pairwise distinct.
///
/// Witness `i < ℓ` swaps pair `i` for `w z_i`; the last witness is the
/// plain set of pairs.
pub fn adapter_from_parallel_pairs(
    g: &EdgeColouredGraph,
    pairs: &[(Vertex, Vertex)],
    zs: &[Vertex],
    w: Vertex,
) -> Result<Adapter, AdapterError> {
    if pairs.len() != zs.len() {
        return Err(AdapterError::LengthMismatch { pairs: pairs.len(), zs: zs.len() });
    }
    let mut vertices = VertexSet::new();
    for v in pairs.iter().flat_map(|&(x, y)| [x, y]).chain(zs.iter().copied()).chain([w]) {
        if !vertices.insert(v) {
            return Err(AdapterError::VertexCollision(v));
        }
    }
    let mut colours = ColourSet::new();
    let mut base = Vec::with_capacity(pairs.len());
    let mut spokes = Vec::with_capacity(pairs.len());
    for (&(x, y), &z) in pairs.iter().zip(zs) {
        let xy = require_edge(g, x, y)?;
        let zw = require_edge(g, z, w)?;
        if xy.colour != zw.colour {
            return Err(AdapterError::ColourMismatch(xy.colour, zw.colour));
        }
        if !colours.insert(xy.colour) {
            return Err(AdapterError::ColourCollision(xy.colour));
        }
        base.push(xy);
        spokes.push(zw);
    }

    let mut witnesses: Vec<Matching> = (0..pairs.len())
        .map(|i| base.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).chain([spokes[i]]).collect())
        .collect();
    witnesses.push(base.into_iter().collect());
    Ok(Adapter { vertices, colours, witnesses })
}

/// Disjoint union. The level is the maximum input level; shorter witness
/// lists are padded by repeating their last witness. The union of no
/// adapters is the empty adapter of level 1.
pub fn adapter_union(adapters: &[Adapter]) -> Result<Adapter, AdapterError> {
    let mut vertices = VertexSet::new();
    let mut colours = ColourSet::new();
    for a in adapters {
        if let Some(&v) = a.vertices.iter().find(|v| vertices.contains(v)) {
            return Err(AdapterError::VertexCollision(v));
        }
        if let Some(&c) = a.colours.iter().find(|c| colours.contains(c)) {
            return Err(AdapterError::ColourCollision(c));
        }
        vertices.extend(a.vertices.iter().copied());
        colours.extend(a.colours.iter().copied());
    }
    let level = adapters.iter().map(Adapter::level).max().unwrap_or(1);
    let witnesses = (0..level).map(|i| Matching::join(adapters.iter().map(|a| a.padded_witness(i)))).collect();
    Ok(Adapter { vertices, colours, witnesses })
}

/// Grows `a` by `x, y, z` using edges `xy` and `zw` (with `w` in `a`) of a
/// shared colour not yet in `a`. Level and colour count both go up by one.
pub fn adapter_absorb(
    g: &EdgeColouredGraph,
    a: &Adapter,
    x: Vertex,
    y: Vertex,
    z: Vertex,
    w: Vertex,
) -> Result<Adapter, AdapterError> {
    for v in [x, y, z] {
        if a.vertices.contains(&v) {
            return Err(AdapterError::VertexCollision(v));
        }
    }
    if x == y || y == z || x == z {
        return Err(AdapterError::VertexCollision(if y == z { y } else { x }));
    }
    if !a.vertices.contains(&w) {
        return Err(AdapterError::NotInAdapter(w));
    }
    let xy = require_edge(g, x, y)?;
    let zw = require_edge(g, z, w)?;
    if xy.colour != zw.colour {
        return Err(AdapterError::ColourMismatch(xy.colour, zw.colour));
    }
    if a.colours.contains(&xy.colour) {
        return Err(AdapterError::ColourCollision(xy.colour));
    }
    // Every vertex of a valid adapter is missed by some witness.
    let i0 = a.witness_missing(w).ok_or(AdapterError::NotInAdapter(w))?;

    let mut witnesses: Vec<Matching> = a
        .witnesses
        .iter()
        .map(|m| {
            let mut m = m.clone();
            m.push(xy);
            m
        })
        .collect();
    let mut extra = a.witnesses[i0].clone();
    extra.push(zw);
    witnesses.push(extra);

    let mut vertices = a.vertices.clone();
    vertices.extend([x, y, z]);
    let mut colours = a.colours.clone();
    colours.insert(xy.colour);
    Ok(Adapter { vertices, colours, witnesses })
}
