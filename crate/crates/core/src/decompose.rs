//! Edge-decomposition into ⌊tn/2⌋ rainbow matchings when every colour class
//! has maximum degree at most t.
//!
//! Missing pairs are first filled in with fresh colours so the host is
//! complete. Colour classes are then assigned, largest first, to the parts:
//! each class is matched into the parts it is vertex-disjoint from, which
//! succeeds whenever Hall's condition holds for that class. For t ≥ 11 it
//! always does.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Colour, Edge, EdgeColouredGraph, Matching};
use crate::oracle::{hall_violator, max_bipartite_matching, BipartiteAssignment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("monochromatic degree {found} exceeds t = {t}")]
    MonoDegree { found: usize, t: usize },
    #[error(
        "Hall's condition fails for colour {colour}: {} edges fit only {neighbourhood} parts",
        edges.len()
    )]
    HallFailure { colour: Colour, edges: Vec<Edge>, neighbourhood: usize },
    #[error("t·n = {t}·{n} is odd, no t-regular graph exists")]
    Parity { t: usize, n: usize },
    #[error("t = {t} must be below n = {n}")]
    TooDense { t: usize, n: usize },
}

impl DecomposeError {
    /// Hall failures are outcomes of the procedure; the other variants
    /// reject the input.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, DecomposeError::HallFailure { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: usize,
    pub t: usize,
    pub parts: Vec<Matching>,
}

impl Decomposition {
    pub fn nonempty_parts(&self) -> usize {
        self.parts.iter().filter(|m| !m.is_empty()).count()
    }
}

/// ⌊tn/2⌋.
pub fn part_count(t: usize, n: usize) -> usize {
    t * n / 2
}

/// Decomposes `g` into ⌊tn/2⌋ rainbow matchings, empty ones included.
pub fn decompose(g: &EdgeColouredGraph, t: usize) -> Result<Decomposition, DecomposeError> {
    decompose_with(g, t, false)
}

/// As [`decompose`]; with `keep_completion` the fresh-colour edges of the
/// completed host stay in the parts.
pub fn decompose_with(g: &EdgeColouredGraph, t: usize, keep_completion: bool) -> Result<Decomposition, DecomposeError> {
    let found = g.mono_max_degree();
    if found > t {
        return Err(DecomposeError::MonoDegree { found, t });
    }
    let n = g.n();
    let slots = part_count(t, n);
    if slots == 0 {
        return Ok(Decomposition { n, t, parts: Vec::new() });
    }

    let (complete, fresh) = g.complete_with_fresh_colours();
    let mut classes: Vec<(Colour, Vec<Edge>)> = complete.colour_classes().into_iter().collect();
    classes.sort_by(|(ca, a), (cb, b)| b.len().cmp(&a.len()).then(ca.cmp(cb)));

    let mut parts = vec![Matching::new(); slots];
    let mut occupied = vec![vec![false; n]; slots];
    for (colour, mut edges) in classes {
        edges.sort_by_key(Edge::key);
        let adjacency =
            edges.iter().map(|e| (0..slots).filter(|&j| !occupied[j][e.u] && !occupied[j][e.v]).collect()).collect();
        let b = max_bipartite_matching(BipartiteAssignment::new(slots, adjacency));
        if !b.is_saturated() {
            let items = hall_violator(&b).expect("unsaturated assignment");
            let neighbourhood = b.neighbourhood(&items).len();
            return Err(DecomposeError::HallFailure {
                colour,
                edges: items.iter().map(|&i| edges[i]).collect(),
                neighbourhood,
            });
        }
        for (e, slot) in edges.iter().zip(&b.assignment) {
            let j = slot.expect("saturated");
            parts[j].push(*e);
            occupied[j][e.u] = true;
            occupied[j][e.v] = true;
        }
    }

    for part in &mut parts {
        if !keep_completion {
            part.edges.retain(|e| !fresh.contains(&e.colour));
        }
        part.edges.sort();
    }
    Ok(Decomposition { n, t, parts })
}

/// Why `d` is not a rainbow-matching decomposition of `g` into ⌊tn/2⌋
/// parts, or `Ok(())`.
pub fn check_decomposition(g: &EdgeColouredGraph, d: &Decomposition) -> Result<(), String> {
    if d.n != g.n() {
        return Err(format!("decomposition is for {} vertices, graph has {}", d.n, g.n()));
    }
    let expected = part_count(d.t, d.n);
    if d.parts.len() != expected {
        return Err(format!("{} parts, expected ⌊tn/2⌋ = {expected}", d.parts.len()));
    }
    let mut seen = HashSet::new();
    for (j, part) in d.parts.iter().enumerate() {
        for e in part {
            if g.edge(e.u, e.v).is_none_or(|f| f.colour != e.colour) {
                return Err(format!("part {j}: ({}, {}, {}) is not an edge of the graph", e.u, e.v, e.colour));
            }
            if !seen.insert(e.key()) {
                return Err(format!("part {j}: edge ({}, {}) appears twice", e.u, e.v));
            }
        }
        if !part.is_rainbow() {
            return Err(format!("part {j} is not a rainbow matching"));
        }
    }
    if seen.len() != g.edge_count() {
        let missing = g.edges().iter().find(|e| !seen.contains(&e.key())).expect("some edge uncovered");
        return Err(format!("edge ({}, {}) is in no part", missing.u, missing.v));
    }
    Ok(())
}

pub fn verify_decomposition(g: &EdgeColouredGraph, d: &Decomposition) -> bool {
    check_decomposition(g, d).is_ok()
}

/// Parts needed by any rainbow-matching decomposition: one per edge of a
/// colour class, one per edge at a vertex, and ⌊n/2⌋ edges per part.
pub fn cover_lower_bound(g: &EdgeColouredGraph) -> usize {
    let largest_class = g.colour_classes().values().map(Vec::len).max().unwrap_or(0);
    let half = g.n() / 2;
    let by_size = if half == 0 { 0 } else { g.edge_count().div_ceil(half) };
    largest_class.max(g.max_degree()).max(by_size)
}

/// A t-regular circulant on `n` vertices, all in colour 1: vertex `i` is
/// joined to `i+1, …, i+⌊t/2⌋` and, for odd t, to `i + n/2`.
pub fn sharpness_instance(t: usize, n: usize) -> Result<EdgeColouredGraph, DecomposeError> {
    if t >= n {
        return Err(DecomposeError::TooDense { t, n });
    }
    if (t * n) % 2 == 1 {
        return Err(DecomposeError::Parity { t, n });
    }
    let mut edges = HashSet::new();
    for i in 0..n {
        for s in 1..=t / 2 {
            edges.insert(Edge::new(i, (i + s) % n, 1));
        }
        if t % 2 == 1 {
            edges.insert(Edge::new(i, (i + n / 2) % n, 1));
        }
    }
    Ok(EdgeColouredGraph::new(n, edges).expect("circulant edges are simple"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono_complete(n: usize) -> EdgeColouredGraph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, 1)));
        EdgeColouredGraph::new(n, edges).unwrap()
    }

    #[test]
    fn triangle_one_colour() {
        let g = mono_complete(3);
        let d = decompose(&g, 11).unwrap();
        assert_eq!(d.parts.len(), 16);
        assert_eq!(d.nonempty_parts(), 3);
        assert!(verify_decomposition(&g, &d));
    }

    #[test]
    fn k12_one_colour() {
        let g = mono_complete(12);
        let d = decompose(&g, 11).unwrap();
        assert_eq!(d.parts.len(), 66);
        assert!(d.parts.iter().all(|p| p.len() == 1));
        assert!(verify_decomposition(&g, &d));
        assert_eq!(cover_lower_bound(&g), 66);
        assert_eq!(decompose(&g, 10), Err(DecomposeError::MonoDegree { found: 11, t: 10 }));
    }

    #[test]
    fn keep_completion_covers_complete_graph() {
        let g = EdgeColouredGraph::new(5, [(0, 1, 1), (2, 3, 1)]).unwrap();
        let d = decompose_with(&g, 11, true).unwrap();
        let (complete, _) = g.complete_with_fresh_colours();
        assert!(verify_decomposition(&complete, &d));
        assert!(!verify_decomposition(&g, &d));
    }

    #[test]
    fn tampering_detected() {
        let g = mono_complete(4);
        let d = decompose(&g, 11).unwrap();
        let mut dup = d.clone();
        let e = dup.parts.iter().find(|p| !p.is_empty()).unwrap().edges[0];
        let j = dup.parts.iter().position(|p| p.is_empty()).unwrap();
        dup.parts[j].push(e);
        assert!(!verify_decomposition(&g, &dup));
        let mut missing = d.clone();
        let j = missing.parts.iter().position(|p| !p.is_empty()).unwrap();
        missing.parts[j].edges.clear();
        assert!(!verify_decomposition(&g, &missing));
        let mut short = d;
        short.parts.pop();
        assert!(!verify_decomposition(&g, &short));
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(cover_lower_bound(&mono_complete(12)), 66);
        let rainbow_k4 =
            EdgeColouredGraph::new(4, [(0, 1, 1), (0, 2, 2), (0, 3, 3), (1, 2, 4), (1, 3, 5), (2, 3, 6)]).unwrap();
        assert_eq!(cover_lower_bound(&rainbow_k4), 3);
        assert_eq!(cover_lower_bound(&EdgeColouredGraph::edgeless(5)), 0);
    }

    #[test]
    fn sharpness_examples() {
        let c5 = sharpness_instance(2, 5).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert!((0..5).all(|v| c5.degree(v) == 2));
        assert_eq!(cover_lower_bound(&c5), 5);
        assert_eq!(sharpness_instance(11, 12).unwrap(), mono_complete(12));
        assert_eq!(sharpness_instance(3, 5), Err(DecomposeError::Parity { t: 3, n: 5 }));
        assert_eq!(sharpness_instance(5, 5), Err(DecomposeError::TooDense { t: 5, n: 5 }));
        let g = sharpness_instance(3, 8).unwrap();
        assert!((0..8).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn small_t_reports_hall_failure() {
        // Three disjoint same-colour edges with t = 1 on 6 vertices: 3 parts,
        // but the fresh edges of K_6 cannot all fit.
        let g = EdgeColouredGraph::new(6, [(0, 1, 1), (2, 3, 1), (4, 5, 1)]).unwrap();
        match decompose(&g, 1) {
            Err(DecomposeError::HallFailure { edges, neighbourhood, .. }) => assert!(neighbourhood < edges.len()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
