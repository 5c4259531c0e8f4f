//! Exact reference algorithms: maximum rainbow matching by branch and
//! bound, and maximum bipartite matching with Hall-violator certificates.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Colour, EdgeColouredGraph, Matching};

/// Maximum-cardinality rainbow matching. Exponential in the worst case;
/// meant for small instances.
pub fn max_rainbow_matching_exact(g: &EdgeColouredGraph) -> (usize, Matching) {
    let m = search(g, usize::MAX);
    (m.len(), m)
}

/// A rainbow matching with at least `target` edges if one exists. Stops as
/// soon as the target is reached.
pub fn rainbow_matching_of_size(g: &EdgeColouredGraph, target: usize) -> Option<Matching> {
    let m = search(g, target);
    (m.len() >= target).then(|| Matching { edges: m.edges[..target].to_vec() })
}

struct Search {
    edges: Vec<crate::graph::Edge>,
    // distinct colours among edges[i..]
    suffix_colours: Vec<usize>,
    used_vertex: Vec<bool>,
    used_colour: std::collections::HashSet<Colour>,
    current: Vec<usize>,
    best: Vec<usize>,
    ceiling: usize,
    n: usize,
}

fn search(g: &EdgeColouredGraph, target: usize) -> Matching {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    let deg = |i: usize| {
        let e = g.edges()[i];
        g.degree(e.u) + g.degree(e.v)
    };
    order.sort_by(|&a, &b| deg(b).cmp(&deg(a)).then(a.cmp(&b)));
    let edges: Vec<_> = order.iter().map(|&i| g.edges()[i]).collect();

    let mut suffix_colours = vec![0; edges.len() + 1];
    let mut seen = std::collections::HashSet::new();
    for i in (0..edges.len()).rev() {
        seen.insert(edges[i].colour);
        suffix_colours[i] = seen.len();
    }
    let ceiling = (g.n() / 2).min(suffix_colours[0]).min(target);

    let mut s = Search {
        edges,
        suffix_colours,
        used_vertex: vec![false; g.n()],
        used_colour: Default::default(),
        current: Vec::new(),
        best: Vec::new(),
        ceiling,
        n: g.n(),
    };
    s.descend(0);
    s.best.iter().map(|&i| s.edges[i]).collect()
}

impl Search {
    fn done(&self) -> bool {
        self.best.len() >= self.ceiling
    }

    fn descend(&mut self, pos: usize) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.done() || pos == self.edges.len() {
            return;
        }
        let free_pairs = (self.n - 2 * self.current.len()) / 2;
        let bound = (self.edges.len() - pos).min(self.suffix_colours[pos]).min(free_pairs);
        if self.current.len() + bound <= self.best.len() {
            return;
        }
        let e = self.edges[pos];
        if !self.used_vertex[e.u] && !self.used_vertex[e.v] && !self.used_colour.contains(&e.colour) {
            self.used_vertex[e.u] = true;
            self.used_vertex[e.v] = true;
            self.used_colour.insert(e.colour);
            self.current.push(pos);
            self.descend(pos + 1);
            self.current.pop();
            self.used_colour.remove(&e.colour);
            self.used_vertex[e.u] = false;
            self.used_vertex[e.v] = false;
            if self.done() {
                return;
            }
        }
        self.descend(pos + 1);
    }
}

/// Items on the left, slots on the right; `adjacency[i]` lists the slots
/// item `i` may take, in the order they are tried.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteAssignment {
    pub slots: usize,
    pub adjacency: Vec<Vec<usize>>,
    pub assignment: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("every item is assigned; there is no Hall violator")]
    Saturated,
}

impl BipartiteAssignment {
    pub fn new(slots: usize, adjacency: Vec<Vec<usize>>) -> Self {
        let assignment = vec![None; adjacency.len()];
        BipartiteAssignment { slots, adjacency, assignment }
    }

    pub fn items(&self) -> usize {
        self.adjacency.len()
    }

    pub fn matched(&self) -> usize {
        self.assignment.iter().flatten().count()
    }

    pub fn is_saturated(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// Slots adjacent to at least one of `items`.
    pub fn neighbourhood(&self, items: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.slots];
        for &i in items {
            for &s in &self.adjacency[i] {
                seen[s] = true;
            }
        }
        (0..self.slots).filter(|&s| seen[s]).collect()
    }
}

/// Hopcroft–Karp: phases of BFS layering from free items followed by
/// DFS along shortest augmenting paths.
pub fn max_bipartite_matching(mut b: BipartiteAssignment) -> BipartiteAssignment {
    const INF: usize = usize::MAX;
    let items = b.items();
    let mut owner: Vec<Option<usize>> = vec![None; b.slots];
    for (i, s) in b.assignment.iter().enumerate() {
        if let Some(s) = *s {
            owner[s] = Some(i);
        }
    }
    let mut dist = vec![INF; items];

    loop {
        let mut queue = VecDeque::new();
        for (i, d) in dist.iter_mut().enumerate() {
            if b.assignment[i].is_none() {
                *d = 0;
                queue.push_back(i);
            } else {
                *d = INF;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &s in &b.adjacency[i] {
                match owner[s] {
                    None => found = true,
                    Some(j) if dist[j] == INF => {
                        dist[j] = dist[i] + 1;
                        queue.push_back(j);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next_edge = vec![0usize; items];
        for i in 0..items {
            if b.assignment[i].is_none() {
                augment(&mut b, &mut owner, &mut dist, &mut next_edge, i);
            }
        }
    }
    b
}

fn augment(
    b: &mut BipartiteAssignment,
    owner: &mut [Option<usize>],
    dist: &mut [usize],
    next_edge: &mut [usize],
    i: usize,
) -> bool {
    while next_edge[i] < b.adjacency[i].len() {
        let s = b.adjacency[i][next_edge[i]];
        let free_or_deeper = match owner[s] {
            None => true,
            Some(j) => dist[j] == dist[i] + 1 && augment(b, owner, dist, next_edge, j),
        };
        if free_or_deeper {
            b.assignment[i] = Some(s);
            owner[s] = Some(i);
            return true;
        }
        next_edge[i] += 1;
    }
    dist[i] = usize::MAX;
    false
}

/// Items reachable by alternating paths from the first unassigned item.
/// Their neighbourhood is exactly one slot short of their count.
pub fn hall_violator(b: &BipartiteAssignment) -> Result<Vec<usize>, OracleError> {
    let root = b.assignment.iter().position(Option::is_none).ok_or(OracleError::Saturated)?;
    let mut owner: Vec<Option<usize>> = vec![None; b.slots];
    for (i, s) in b.assignment.iter().enumerate() {
        if let Some(s) = *s {
            owner[s] = Some(i);
        }
    }
    let mut in_set = vec![false; b.items()];
    let mut seen_slot = vec![false; b.slots];
    in_set[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(i) = queue.pop_front() {
        for &s in &b.adjacency[i] {
            if seen_slot[s] {
                continue;
            }
            seen_slot[s] = true;
            // An unowned slot here would be an augmenting path: the input
            // was not maximum.
            if let Some(j) = owner[s] {
                if !in_set[j] {
                    in_set[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    Ok((0..b.items()).filter(|&i| in_set[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn k4_proper_three_colouring_has_rainbow_number_one() {
        let g = EdgeColouredGraph::new(4, [(0, 1, 1), (2, 3, 1), (0, 2, 2), (1, 3, 2), (0, 3, 3), (1, 2, 3)]).unwrap();
        let (size, m) = max_rainbow_matching_exact(&g);
        assert_eq!(size, 1);
        assert!(g.is_rainbow_matching(&m).unwrap());
    }

    #[test]
    fn rainbow_c4() {
        let g = EdgeColouredGraph::new(4, [(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 0, 4)]).unwrap();
        let (size, m) = max_rainbow_matching_exact(&g);
        assert_eq!(size, 2);
        assert!(g.is_rainbow_matching(&m).unwrap());
    }

    #[test]
    fn single_edge_and_empty() {
        let g = EdgeColouredGraph::new(2, [(0, 1, 0)]).unwrap();
        assert_eq!(max_rainbow_matching_exact(&g), (1, [Edge::new(0, 1, 0)].into_iter().collect()));
        assert_eq!(max_rainbow_matching_exact(&EdgeColouredGraph::edgeless(3)).0, 0);
        assert_eq!(rainbow_matching_of_size(&g, 0), Some(Matching::new()));
        assert_eq!(rainbow_matching_of_size(&g, 2), None);
    }

    #[test]
    fn bipartite_small_cases() {
        let b = max_bipartite_matching(BipartiteAssignment::new(2, vec![vec![0, 1], vec![0, 1]]));
        assert!(b.is_saturated());
        let b = max_bipartite_matching(BipartiteAssignment::new(2, vec![vec![0], vec![0, 1]]));
        assert_eq!(b.assignment, vec![Some(0), Some(1)]);
        assert_eq!(hall_violator(&b), Err(OracleError::Saturated));
    }

    #[test]
    fn violator_for_shared_slot() {
        let b = max_bipartite_matching(BipartiteAssignment::new(2, vec![vec![0], vec![0]]));
        assert_eq!(b.matched(), 1);
        let s = hall_violator(&b).unwrap();
        assert_eq!(s, vec![0, 1]);
        assert_eq!(b.neighbourhood(&s), vec![0]);
    }

    #[test]
    fn long_augmenting_chain() {
        // Forces augmentation along a path of length > 1.
        let adjacency = vec![vec![0, 1], vec![0], vec![1, 2], vec![2, 3], vec![3]];
        let b = max_bipartite_matching(BipartiteAssignment::new(4, adjacency));
        assert_eq!(b.matched(), 4);
    }
}
