//! Edge-coloured simple graphs, matchings and colour-degree statistics.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;
pub type Colour = u32;
pub type ColourSet = BTreeSet<Colour>;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("edge {{{0}, {1}}} with colour {2} is not in the graph")]
    MissingEdge(Vertex, Vertex, Colour),
    #[error("graph has no vertices")]
    Empty,
}

/// An undirected coloured edge. Endpoints are stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(Vertex, Vertex, Colour)", into = "(Vertex, Vertex, Colour)")]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub colour: Colour,
}

impl Edge {
    pub fn new(a: Vertex, b: Vertex, colour: Colour) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, colour }
    }

    pub fn touches(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }

    /// The endpoint opposite `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: Vertex) -> Vertex {
        if self.u == x {
            self.v
        } else {
            assert_eq!(self.v, x, "vertex {x} is not an endpoint");
            self.u
        }
    }

    pub fn key(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }
}

impl From<(Vertex, Vertex, Colour)> for Edge {
    fn from((a, b, c): (Vertex, Vertex, Colour)) -> Self {
        Edge::new(a, b, c)
    }
}

impl From<Edge> for (Vertex, Vertex, Colour) {
    fn from(e: Edge) -> Self {
        (e.u, e.v, e.colour)
    }
}

/// A list of edges. Nothing is enforced on construction; use
/// [`EdgeColouredGraph::is_rainbow_matching`] to validate against a host.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    pub edges: Vec<Edge>,
}

impl Matching {
    pub fn new() -> Self {
        Matching::default()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn push(&mut self, e: Edge) {
        self.edges.push(e);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edge> {
        self.edges.iter()
    }

    pub fn colours(&self) -> ColourSet {
        self.edges.iter().map(|e| e.colour).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        self.edges.iter().flat_map(|e| [e.u, e.v]).collect()
    }

    pub fn covers(&self, x: Vertex) -> bool {
        self.edges.iter().any(|e| e.touches(x))
    }

    /// Edge of the given colour, if any.
    pub fn edge_with_colour(&self, c: Colour) -> Option<Edge> {
        self.edges.iter().copied().find(|e| e.colour == c)
    }

    pub fn without(&self, e: &Edge) -> Matching {
        Matching { edges: self.edges.iter().copied().filter(|f| f != e).collect() }
    }

    /// Vertex-disjoint and colour-distinct, ignoring any host graph.
    pub fn is_rainbow(&self) -> bool {
        let mut seen_v = VertexSet::new();
        let mut seen_c = ColourSet::new();
        self.edges.iter().all(|e| e.u != e.v && seen_v.insert(e.u) && seen_v.insert(e.v) && seen_c.insert(e.colour))
    }

    /// Union of matchings, order preserved.
    pub fn join<'a>(parts: impl IntoIterator<Item = &'a Matching>) -> Matching {
        Matching { edges: parts.into_iter().flat_map(|m| m.edges.iter().copied()).collect() }
    }

    /// Edges sorted by endpoints, for canonical output.
    pub fn sorted(mut self) -> Matching {
        self.edges.sort();
        self
    }
}

impl FromIterator<Edge> for Matching {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        Matching { edges: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a Matching {
    type Item = &'a Edge;
    type IntoIter = std::slice::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}

/// Simple undirected graph on vertices `0..n` with one colour per edge.
///
/// Immutable after construction. Edges are kept sorted by endpoint pair,
/// and each vertex has a list of incident edge indices in that order.
#[derive(Debug, Clone)]
pub struct EdgeColouredGraph {
    n: usize,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
    index: HashMap<(Vertex, Vertex), usize>,
}

impl PartialEq for EdgeColouredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for EdgeColouredGraph {}

impl EdgeColouredGraph {
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut list: Vec<Edge> = Vec::new();
        for e in edges {
            let e: Edge = e.into();
            if e.u == e.v {
                return Err(GraphError::Loop(e.u));
            }
            if e.v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: e.v, n });
            }
            list.push(e);
        }
        list.sort();
        for w in list.windows(2) {
            if w[0].key() == w[1].key() {
                return Err(GraphError::DuplicateEdge(w[0].u, w[0].v));
            }
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut incident = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            incident[e.u].push(i);
            incident[e.v].push(i);
            index.insert(e.key(), i);
        }
        EdgeColouredGraph { n, edges, incident, index }
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, a: Vertex, b: Vertex) -> Option<Edge> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.index.get(&key).map(|&i| self.edges[i])
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edge(e.u, e.v).is_some_and(|f| f.colour == e.colour)
    }

    /// Incident edges of `v` in ascending endpoint order.
    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = Edge> + '_ {
        self.incident[v].iter().map(move |&i| self.edges[i])
    }

    pub fn neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.incident(v).map(move |e| e.other(v))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incident[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn colours(&self) -> ColourSet {
        self.edges.iter().map(|e| e.colour).collect()
    }

    pub fn max_colour(&self) -> Option<Colour> {
        self.edges.iter().map(|e| e.colour).max()
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn colours_at(&self, v: Vertex) -> ColourSet {
        self.incident(v).map(|e| e.colour).collect()
    }

    /// Number of distinct colours on edges at `v`.
    pub fn colour_degree(&self, v: Vertex) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.colours_at(v).len())
    }

    pub fn min_colour_degree(&self) -> Result<usize, GraphError> {
        (0..self.n).map(|v| self.colours_at(v).len()).min().ok_or(GraphError::Empty)
    }

    /// Largest degree of a single colour class; 0 when edgeless.
    pub fn mono_max_degree(&self) -> usize {
        let mut counts: HashMap<(Colour, Vertex), usize> = HashMap::new();
        for e in &self.edges {
            *counts.entry((e.colour, e.u)).or_default() += 1;
            *counts.entry((e.colour, e.v)).or_default() += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// Edges grouped by colour, each class in ascending endpoint order.
    pub fn colour_classes(&self) -> BTreeMap<Colour, Vec<Edge>> {
        let mut classes: BTreeMap<Colour, Vec<Edge>> = BTreeMap::new();
        for e in &self.edges {
            classes.entry(e.colour).or_default().push(*e);
        }
        classes
    }

    /// True iff every edge of `m` is in the graph, the edges are pairwise
    /// vertex-disjoint, and their colours are pairwise distinct.
    pub fn is_rainbow_matching(&self, m: &Matching) -> Result<bool, GraphError> {
        for e in m {
            if !self.contains_edge(e) {
                return Err(GraphError::MissingEdge(e.u, e.v, e.colour));
            }
        }
        Ok(m.is_rainbow())
    }

    /// Same vertex set, only the edges whose colour is not in `colours`.
    pub fn delete_colours(&self, colours: &ColourSet) -> EdgeColouredGraph {
        let edges = self.edges.iter().copied().filter(|e| !colours.contains(&e.colour)).collect();
        Self::from_sorted(self.n, edges)
    }

    /// Keeps vertex ids; only edges with both ends in `keep` survive.
    pub fn induced(&self, keep: &VertexSet) -> EdgeColouredGraph {
        let edges = self.edges.iter().copied().filter(|e| keep.contains(&e.u) && keep.contains(&e.v)).collect();
        Self::from_sorted(self.n, edges)
    }

    /// The complete graph on the same vertices: original edges keep their
    /// colour and every missing pair gets its own colour above all
    /// existing ones. Also returns the set of fresh colours.
    pub fn complete_with_fresh_colours(&self) -> (EdgeColouredGraph, ColourSet) {
        let mut next = self.max_colour().map_or(0, |c| c + 1);
        let mut fresh = ColourSet::new();
        let mut edges = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for u in 0..self.n {
            for v in u + 1..self.n {
                match self.edge(u, v) {
                    Some(e) => edges.push(e),
                    None => {
                        edges.push(Edge::new(u, v, next));
                        fresh.insert(next);
                        next += 1;
                    }
                }
            }
        }
        (Self::from_sorted(self.n, edges), fresh)
    }

    /// Two-colouring of the vertices with every edge crossing, if one
    /// exists. BFS from the lowest unvisited vertex, which goes to side A.
    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(false);
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                let sx = side[x].unwrap();
                for y in self.neighbours(x) {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            queue.push_back(y);
                        }
                        Some(sy) if sy == sx => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let a = (0..self.n).filter(|&v| side[v] == Some(false)).collect();
        let b = (0..self.n).filter(|&v| side[v] == Some(true)).collect();
        Some((a, b))
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Result<EdgeColouredGraph, GraphError> {
        EdgeColouredGraph::new(self.n, self.edges.iter().map(|e| Edge::new(perm[e.u], perm[e.v], e.colour)))
    }
}
