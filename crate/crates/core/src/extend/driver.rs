//! Partition-improvement driver.
//!
//! The vertex set is split into adapters `W_1, …, W_p` (with disjoint
//! colour sets `C_i`, `|C_i| = ℓ_i`, `|W_i| = 3ℓ_i + 1`) and a remainder
//! `U` carrying a rainbow matching `M_U` that avoids every `C_i`, with
//! `|M_U| = k − 1 − Σℓ_i` and at least one vertex of `U` left unmatched.
//! Each iteration either produces a rainbow matching of size k or replaces
//! the partition by one whose parameter string `(ℓ_1 ≥ … ≥ ℓ_p)` is
//! lexicographically larger.
//!
//! Step (2) recurses on a smaller graph whose colour-degree hypothesis only
//! holds relative to the outer partition. The recursive call reports a
//! [`Outcome::Violation`] when it meets a vertex of too small colour
//! degree, and the caller turns that vertex into a partition improvement.

use serde::{Deserialize, Serialize};

use crate::adapter::{adapter_absorb, adapter_from_parallel_pairs, Adapter, AdapterError};
use crate::graph::{ColourSet, Edge, EdgeColouredGraph, Matching, Vertex, VertexSet};

use super::lemmas::extend_dispatch_on;
use super::threshold::{lemma_vertex_bound, theorem2_vertex_bound, Rational};
use super::{ExtendError, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    /// The remainder was large enough to extend inside it.
    Extend,
    /// Recursed on the graph minus the largest adapter.
    Recurse,
    /// Rebuilt a single adapter around an unmatched vertex.
    Absorb,
    /// An edge leaving an adapter with an outside colour was used.
    Switch,
    /// Reported a low colour-degree vertex to the caller.
    Escalate,
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub invocation: usize,
    pub depth: usize,
    pub target: usize,
    pub iteration: usize,
    pub params: Vec<usize>,
    pub rest_size: usize,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionState {
    /// Sorted by colour count, largest first.
    pub parts: Vec<Adapter>,
    pub rest: VertexSet,
    pub rest_matching: Matching,
}

impl PartitionState {
    /// No parts; the remainder is all of `active`.
    pub fn fresh(active: &VertexSet, matching: Matching) -> Self {
        PartitionState { parts: Vec::new(), rest: active.clone(), rest_matching: matching }
    }

    pub fn params(&self) -> Vec<usize> {
        self.parts.iter().map(|a| a.colours.len()).collect()
    }

    fn part_colours(&self) -> ColourSet {
        self.parts.iter().flat_map(|a| a.colours.iter().copied()).collect()
    }

    fn part_of(&self, v: Vertex) -> Option<usize> {
        self.parts.iter().position(|a| a.vertices.contains(&v))
    }

    /// Witness `i` of the union of all parts (shorter parts padded).
    fn witness_union(&self, i: usize) -> Matching {
        Matching::join(self.parts.iter().map(|a| a.padded_witness(i)))
    }

    /// A rainbow matching with colours exactly C avoiding `w`.
    fn witness_union_missing(&self, w: Vertex) -> Matching {
        Matching::join(self.parts.iter().map(|a| match a.witness_missing(w) {
            Some(i) if a.vertices.contains(&w) => &a.witnesses[i],
            _ => &a.witnesses[0],
        }))
    }

    /// The rainbow (k−1)-matching `M_U` plus one witness per part.
    fn full_matching(&self) -> Matching {
        Matching::join([&self.rest_matching, &self.witness_union(0)])
    }

    fn sort_parts(&mut self) {
        self.parts.sort_by_key(|a| std::cmp::Reverse(a.colours.len()));
    }

    /// Checks conditions (a)–(d) and that the parts and remainder
    /// partition `active`.
    pub fn check(&self, g: &EdgeColouredGraph, active: &VertexSet, k: usize) -> Result<(), String> {
        let params = self.params();
        if params.windows(2).any(|w| w[0] < w[1]) {
            return Err(format!("parameters {params:?} not non-increasing"));
        }
        let total: usize = params.iter().sum();
        if total + self.rest_matching.len() + 1 != k {
            return Err(format!("Σℓ = {total} and |M_U| = {} do not sum to k−1 = {}", self.rest_matching.len(), k - 1));
        }
        let mut seen_v = self.rest.clone();
        let mut seen_c = ColourSet::new();
        for (i, a) in self.parts.iter().enumerate() {
            let l = a.colours.len();
            if l == 0 || a.level() != l + 1 || a.vertices.len() != 3 * l + 1 || !a.verify(g) {
                return Err(format!("part {i} is not a C-adapter on 3ℓ+1 vertices"));
            }
            for &v in &a.vertices {
                if !seen_v.insert(v) {
                    return Err(format!("vertex {v} in two blocks"));
                }
            }
            for &c in &a.colours {
                if !seen_c.insert(c) {
                    return Err(format!("colour {c} in two parts"));
                }
            }
        }
        if seen_v != *active {
            return Err("blocks do not cover the vertex set".into());
        }
        let m = &self.rest_matching;
        if !g.is_rainbow_matching(m).unwrap_or(false) {
            return Err("M_U is not a rainbow matching".into());
        }
        if m.iter().any(|e| !self.rest.contains(&e.u) || !self.rest.contains(&e.v)) {
            return Err("M_U leaves U".into());
        }
        if m.iter().any(|e| seen_c.contains(&e.colour)) {
            return Err("M_U uses a part colour".into());
        }
        if self.rest.iter().all(|&v| m.covers(v)) {
            return Err("M_U covers U".into());
        }
        Ok(())
    }
}

enum Outcome {
    Found(Matching),
    /// `vertex` is missed by `matching`, a rainbow (k−1)-matching, and has
    /// colour degree below k.
    Violation {
        vertex: Vertex,
        matching: Matching,
    },
}

enum Next {
    Finish(Outcome),
    Continue(PartitionState),
}

fn internal(msg: impl Into<String>) -> ExtendError {
    ExtendError::Internal(msg.into())
}

fn adapter_bug(e: AdapterError) -> ExtendError {
    internal(format!("adapter construction failed: {e}"))
}

fn minus(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.difference(b).copied().collect()
}

struct Driver<'t> {
    gamma: Rational,
    family: Family,
    trace: &'t mut Vec<TraceRecord>,
    invocations: usize,
}

impl Driver<'_> {
    /// Rainbow matching of size `k` in `g` restricted to `active`, given a
    /// rainbow matching `start` of size k−1 there.
    fn invoke(
        &mut self,
        g: &EdgeColouredGraph,
        active: &VertexSet,
        k: usize,
        mut state: PartitionState,
        depth: usize,
    ) -> Result<Outcome, ExtendError> {
        let invocation = self.invocations;
        self.invocations += 1;
        let record = |trace: &mut Vec<TraceRecord>, iteration, state: &PartitionState, action| {
            trace.push(TraceRecord {
                invocation,
                depth,
                target: k,
                iteration,
                params: state.params(),
                rest_size: state.rest.len(),
                action,
            })
        };

        if k == 1 {
            let outcome = match g.edges().first() {
                Some(&e) => Outcome::Found(Matching { edges: vec![e] }),
                None => Outcome::Violation {
                    vertex: *active.first().ok_or_else(|| internal("empty graph"))?,
                    matching: Matching::new(),
                },
            };
            let action = if matches!(outcome, Outcome::Found(_)) { Action::Done } else { Action::Escalate };
            record(self.trace, 0, &state, action);
            return Ok(outcome);
        }

        let budget = k * k + 3 * k;
        let mut previous: Option<Vec<usize>> = None;
        for iteration in 0..budget {
            if cfg!(debug_assertions) {
                state.check(g, active, k).map_err(|e| internal(format!("partition invariant: {e}")))?;
            }
            let params = state.params();
            if let Some(prev) = &previous {
                if params <= *prev {
                    return Err(internal(format!("parameters did not increase: {prev:?} -> {params:?}")));
                }
            }
            previous = Some(params);

            let (action, next) = self.step(g, active, k, &state, depth)?;
            record(self.trace, iteration, &state, action);
            match next {
                Next::Finish(outcome) => {
                    if matches!(outcome, Outcome::Found(_)) {
                        record(self.trace, iteration, &state, Action::Done);
                    }
                    return Ok(outcome);
                }
                Next::Continue(s) => state = s,
            }
        }
        Err(internal(format!("iteration budget k²+3k = {budget} exceeded for k = {k}")))
    }

    fn step(
        &mut self,
        g: &EdgeColouredGraph,
        active: &VertexSet,
        k: usize,
        state: &PartitionState,
        depth: usize,
    ) -> Result<(Action, Next), ExtendError> {
        let l0 = state.rest_matching.len();
        let colours = state.part_colours();
        let unmatched: Vec<Vertex> = state.rest.iter().copied().filter(|&v| !state.rest_matching.covers(v)).collect();

        for &z in &unmatched {
            if g.colours_at(z).len() < k {
                let outcome = Outcome::Violation { vertex: z, matching: state.full_matching() };
                return Ok((Action::Escalate, Next::Finish(outcome)));
            }
        }

        if let Some(next) = self.switch_from_parts(g, state, &unmatched, &colours)? {
            return Ok((Action::Switch, next));
        }

        let rest_size = Rational::from_integer(state.rest.len() as i64);
        if rest_size > self.gamma * Rational::from_integer(l0 as i64 + 1) {
            return self.extend_in_rest(g, state, &colours).map(|n| (Action::Extend, n));
        }

        let l1 = state.params().first().copied().unwrap_or(0);
        if (self.gamma - 2) * Rational::from_integer(l1 as i64) >= Rational::from_integer(2) {
            return self.recurse(g, active, k, state, depth).map(|n| (Action::Recurse, n));
        }

        self.absorb_around(g, active, state, &unmatched, &colours)
    }

    /// An edge `zw` from an unmatched vertex of U into an adapter, with a
    /// colour outside C, either completes a rainbow k-matching or lets the
    /// adapter swallow `z` and the `M_U` edge of that colour.
    fn switch_from_parts(
        &self,
        g: &EdgeColouredGraph,
        state: &PartitionState,
        unmatched: &[Vertex],
        colours: &ColourSet,
    ) -> Result<Option<Next>, ExtendError> {
        let can_grow = state.rest.len() >= 2 * state.rest_matching.len() + 2;
        for &z in unmatched {
            for e in g.incident(z) {
                let w = e.other(z);
                let Some(j) = state.part_of(w) else { continue };
                if colours.contains(&e.colour) {
                    continue;
                }
                match state.rest_matching.edge_with_colour(e.colour) {
                    None => {
                        let m = Matching::join([&state.rest_matching, &state.witness_union_missing(w)]);
                        let mut m = m;
                        m.push(e);
                        return Ok(Some(Next::Finish(Outcome::Found(m))));
                    }
                    Some(xy) if can_grow => {
                        let grown = adapter_absorb(g, &state.parts[j], xy.u, xy.v, z, w).map_err(adapter_bug)?;
                        let mut next = state.clone();
                        next.parts[j] = grown;
                        next.rest = minus(&state.rest, &[xy.u, xy.v, z].into());
                        next.rest_matching = state.rest_matching.without(&xy);
                        next.sort_parts();
                        return Ok(Some(Next::Continue(next)));
                    }
                    // Growing would leave U fully matched.
                    Some(_) => {}
                }
            }
        }
        Ok(None)
    }

    /// |U| > γ(ℓ_0 + 1): extend `M_U` inside U with the part colours
    /// removed.
    fn extend_in_rest(
        &self,
        g: &EdgeColouredGraph,
        state: &PartitionState,
        colours: &ColourSet,
    ) -> Result<Next, ExtendError> {
        let h = g.induced(&state.rest).delete_colours(colours);
        let k_rest = state.rest_matching.len() + 1;
        let ext = extend_dispatch_on(&h, &state.rest, &state.rest_matching, k_rest, self.family)
            .map_err(|e| internal(format!("extension inside U failed: {e}")))?;
        let e = ext.edge;
        match ext.matching.edge_with_colour(e.colour) {
            None => {
                let mut m = Matching::join([&ext.matching, &state.witness_union(0)]);
                m.push(e);
                Ok(Next::Finish(Outcome::Found(m)))
            }
            Some(xy) => {
                let part = adapter_from_parallel_pairs(g, &[(xy.u, xy.v)], &[e.u], e.v).map_err(adapter_bug)?;
                let mut next = state.clone();
                next.rest = minus(&state.rest, &part.vertices);
                next.rest_matching = ext.matching.without(&xy);
                next.parts.push(part);
                next.sort_parts();
                Ok(Next::Continue(next))
            }
        }
    }

    /// (γ−2)ℓ_1 ≥ 2: solve for k − ℓ_1 without the first adapter and its
    /// colours, then add one of its witnesses.
    fn recurse(
        &mut self,
        g: &EdgeColouredGraph,
        active: &VertexSet,
        k: usize,
        state: &PartitionState,
        depth: usize,
    ) -> Result<Next, ExtendError> {
        let first = &state.parts[0];
        let l1 = first.colours.len();
        let sub_active = minus(active, &first.vertices);
        let sub = g.induced(&sub_active).delete_colours(&first.colours);
        let need = lemma_vertex_bound(self.gamma, k - l1);
        if Rational::from_integer(sub_active.len() as i64) < need {
            return Err(internal(format!("recursive instance has {} vertices, below {need}", sub_active.len())));
        }
        let start = Matching::join(
            std::iter::once(&state.rest_matching).chain(state.parts[1..].iter().map(|a| &a.witnesses[0])),
        );
        let fresh = PartitionState::fresh(&sub_active, start);
        match self.invoke(&sub, &sub_active, k - l1, fresh, depth + 1)? {
            Outcome::Found(m) => Ok(Next::Finish(Outcome::Found(Matching::join([&m, &first.witnesses[0]])))),
            Outcome::Violation { vertex: z, matching: inner } => {
                if g.colours_at(z).len() < k {
                    let matching = Matching::join([&inner, &first.witnesses[0]]);
                    return Ok(Next::Finish(Outcome::Violation { vertex: z, matching }));
                }
                // z lost colour degree only through edges into the first part
                // with colours outside C_1.
                let zw = g
                    .incident(z)
                    .find(|e| first.vertices.contains(&e.other(z)) && !first.colours.contains(&e.colour))
                    .ok_or_else(|| internal(format!("vertex {z} reported low colour degree without cause")))?;
                let w = zw.other(z);
                match inner.edge_with_colour(zw.colour) {
                    None => {
                        let i = first.witness_missing(w).ok_or_else(|| internal("adapter vertex never missed"))?;
                        let mut m = Matching::join([&inner, &first.witnesses[i]]);
                        m.push(zw);
                        Ok(Next::Finish(Outcome::Found(m)))
                    }
                    Some(ab) => {
                        let grown = adapter_absorb(g, first, ab.u, ab.v, z, w).map_err(adapter_bug)?;
                        Ok(Next::Continue(PartitionState {
                            rest: minus(active, &grown.vertices),
                            rest_matching: inner.without(&ab),
                            parts: vec![grown],
                        }))
                    }
                }
            }
        }
    }

    /// Small U and small ℓ_1: build a single adapter around an unmatched
    /// vertex `z` of U from the witness of the union that leaves the most
    /// colours of `z` usable.
    fn absorb_around(
        &self,
        g: &EdgeColouredGraph,
        active: &VertexSet,
        state: &PartitionState,
        unmatched: &[Vertex],
        colours: &ColourSet,
    ) -> Result<(Action, Next), ExtendError> {
        let l1 = state.params().first().copied().ok_or_else(|| internal("remainder too small with no parts"))?;
        let z = unmatched[0];
        let m_u = &state.rest_matching;

        // Edges from z to other unmatched vertices of U with colours outside C.
        for e in g.incident(z) {
            let x = e.other(z);
            if m_u.covers(x) || !state.rest.contains(&x) || colours.contains(&e.colour) {
                continue;
            }
            match m_u.edge_with_colour(e.colour) {
                None => {
                    let mut m = Matching::join([m_u, &state.witness_union(0)]);
                    m.push(e);
                    return Ok((Action::Switch, Next::Finish(Outcome::Found(m))));
                }
                Some(ab) if state.rest.len() >= 2 * m_u.len() + 3 => {
                    let part = adapter_from_parallel_pairs(g, &[(ab.u, ab.v)], &[x], z).map_err(adapter_bug)?;
                    let mut next = state.clone();
                    next.rest = minus(&state.rest, &part.vertices);
                    next.rest_matching = m_u.without(&ab);
                    next.parts.push(part);
                    next.sort_parts();
                    return Ok((Action::Switch, Next::Continue(next)));
                }
                Some(_) => {}
            }
        }

        // For each witness of the union, one endpoint per colour of C.
        let mut best: Option<(usize, Vec<(Edge, Vertex)>)> = None;
        for i in 0..=l1 {
            let witness = state.witness_union(i);
            let mut picks: Vec<(Edge, Vertex)> = Vec::new();
            for &c in colours {
                let x = g
                    .incident(z)
                    .filter(|e| e.colour == c)
                    .map(|e| e.other(z))
                    .filter(|&x| !m_u.covers(x) && !witness.covers(x))
                    .min();
                if let Some(x) = x {
                    let ec = witness.edge_with_colour(c).expect("witness carries every colour of C");
                    picks.push((ec, x));
                }
            }
            if best.as_ref().is_none_or(|(_, b)| picks.len() > b.len()) {
                best = Some((i, picks));
            }
        }
        let (i, picks) = best.expect("at least one witness");
        if picks.len() <= l1 {
            return Err(internal(format!(
                "absorption around vertex {z} found only {} usable colours with ℓ_1 = {l1}; the vertex bound should exclude this",
                picks.len()
            )));
        }
        let pairs: Vec<(Vertex, Vertex)> = picks.iter().map(|(e, _)| (e.u, e.v)).collect();
        let zs: Vec<Vertex> = picks.iter().map(|&(_, x)| x).collect();
        let part = adapter_from_parallel_pairs(g, &pairs, &zs, z).map_err(adapter_bug)?;
        let used: Vec<Edge> = picks.iter().map(|&(e, _)| e).collect();
        let witness = state.witness_union(i);
        let rest_matching: Matching = witness.iter().chain(m_u.iter()).copied().filter(|e| !used.contains(e)).collect();
        let next = PartitionState { rest: minus(active, &part.vertices), rest_matching, parts: vec![part] };
        Ok((Action::Absorb, Next::Continue(next)))
    }
}

fn check_gamma(g: &EdgeColouredGraph, gamma: Rational, family: Family) -> Result<(), ExtendError> {
    let two = Rational::from_integer(2);
    let three = Rational::from_integer(3);
    if gamma <= two || gamma > three {
        return Err(ExtendError::BadParameter(format!("γ = {gamma} is outside (2, 3]")));
    }
    match family {
        Family::General if gamma < three => {
            Err(ExtendError::BadParameter(format!("γ = {gamma} is below 3, the constant for general graphs")))
        }
        Family::Bipartite if g.bipartition().is_none() => Err(ExtendError::NotBipartite),
        _ => Ok(()),
    }
}

/// Rainbow matching of size `k` in `g`, given δ^c(g) ≥ k and
/// `|g| ≥ (2 + γ/2)k + 2(4−γ)/(γ−2)² − 3 + γ`. `gamma` must be 3 for
/// general graphs and may be anything in (2, 3] for bipartite ones.
pub fn find_rainbow_matching(
    g: &EdgeColouredGraph,
    k: usize,
    gamma: Rational,
    family: Family,
) -> Result<Matching, ExtendError> {
    find_rainbow_matching_traced(g, k, gamma, family).map(|(m, _)| m)
}

/// As [`find_rainbow_matching`], also returning one trace record per
/// driver iteration.
pub fn find_rainbow_matching_traced(
    g: &EdgeColouredGraph,
    k: usize,
    gamma: Rational,
    family: Family,
) -> Result<(Matching, Vec<TraceRecord>), ExtendError> {
    check_gamma(g, gamma, family)?;
    let bound = lemma_vertex_bound(gamma, k);
    if Rational::from_integer(g.n() as i64) < bound {
        return Err(ExtendError::TooFewVertices(format!(
            "n ≥ (2+γ/2)k + 2(4−γ)/(γ−2)² − 3 + γ = {bound}: {} < {bound}",
            g.n()
        )));
    }
    let mut trace = Vec::new();
    if k == 0 {
        return Ok((Matching::new(), trace));
    }
    let degree = g.min_colour_degree()?;
    if degree < k {
        let vertex = (0..g.n()).find(|&v| g.colours_at(v).len() == degree).unwrap_or(0);
        return Err(ExtendError::ColourDegree { vertex, degree, required: k });
    }

    let active: VertexSet = (0..g.n()).collect();
    let mut driver = Driver { gamma, family, trace: &mut trace, invocations: 0 };
    let mut m = Matching::new();
    for j in 1..=k {
        m = match driver.invoke(g, &active, j, PartitionState::fresh(&active, m), 0)? {
            Outcome::Found(m) => m,
            Outcome::Violation { vertex, .. } => {
                return Err(internal(format!("vertex {vertex} reported below δ^c at top level")));
            }
        };
        if m.len() != j || !g.is_rainbow_matching(&m)? {
            return Err(internal(format!("driver returned an invalid matching for k = {j}")));
        }
    }
    Ok((m.sorted(), trace))
}

/// General graphs with 2n ≥ 7k + 4 and δ^c ≥ k.
pub fn theorem1(g: &EdgeColouredGraph, k: usize) -> Result<Matching, ExtendError> {
    theorem1_traced(g, k).map(|(m, _)| m)
}

pub fn theorem1_traced(g: &EdgeColouredGraph, k: usize) -> Result<(Matching, Vec<TraceRecord>), ExtendError> {
    let (lhs, rhs) = (2 * g.n(), 7 * k + 4);
    if lhs < rhs {
        return Err(ExtendError::TooFewVertices(format!("2n ≥ 7k+4: {lhs} < {rhs}")));
    }
    check_min_colour_degree(g, k)?;
    find_rainbow_matching_traced(g, k, Rational::from_integer(3), Family::General)
}

/// Bipartite graphs with n ≥ (3+ε)k + ε⁻² and δ^c ≥ k, for 0 < ε ≤ 1/2.
pub fn theorem2(g: &EdgeColouredGraph, k: usize, epsilon: Rational) -> Result<Matching, ExtendError> {
    theorem2_traced(g, k, epsilon).map(|(m, _)| m)
}

pub fn theorem2_traced(
    g: &EdgeColouredGraph,
    k: usize,
    epsilon: Rational,
) -> Result<(Matching, Vec<TraceRecord>), ExtendError> {
    if epsilon <= Rational::from_integer(0) || epsilon > Rational::new(1, 2) {
        return Err(ExtendError::BadParameter(format!("ε = {epsilon} is outside (0, 1/2]")));
    }
    if g.bipartition().is_none() {
        return Err(ExtendError::NotBipartite);
    }
    let bound = theorem2_vertex_bound(epsilon, k);
    if Rational::from_integer(g.n() as i64) < bound {
        return Err(ExtendError::TooFewVertices(format!("n ≥ (3+ε)k + ε⁻²: {} < {bound}", g.n())));
    }
    check_min_colour_degree(g, k)?;
    let gamma = Rational::from_integer(2) + epsilon * 2;
    find_rainbow_matching_traced(g, k, gamma, Family::Bipartite)
}

fn check_min_colour_degree(g: &EdgeColouredGraph, k: usize) -> Result<(), ExtendError> {
    for v in 0..g.n() {
        let degree = g.colours_at(v).len();
        if degree < k {
            return Err(ExtendError::ColourDegree { vertex: v, degree, required: k });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    /// Edge list with one-off colours available for filling in.
    #[derive(Default)]
    struct Builder {
        edges: BTreeMap<(Vertex, Vertex), u32>,
    }

    impl Builder {
        fn add(&mut self, u: Vertex, v: Vertex, c: u32) {
            self.edges.insert((u.min(v), u.max(v)), c);
        }

        /// Joins every missing pair inside `0..n` with a fresh colour.
        fn fill(&mut self, n: usize) {
            let mut c = 1000;
            for u in 0..n {
                for v in u + 1..n {
                    self.edges.entry((u, v)).or_insert_with(|| {
                        c += 1;
                        c
                    });
                }
            }
        }

        fn build(&self, n: usize) -> EdgeColouredGraph {
            EdgeColouredGraph::new(n, self.edges.iter().map(|(&(u, v), &c)| (u, v, c))).unwrap()
        }
    }

    /// Runs one top-level invocation from a prepared partition.
    fn run_from(g: &EdgeColouredGraph, k: usize, state: PartitionState) -> (Matching, Vec<TraceRecord>) {
        let active: VertexSet = (0..g.n()).collect();
        state.check(g, &active, k).unwrap();
        let mut trace = Vec::new();
        let mut driver =
            Driver { gamma: Rational::from_integer(3), family: Family::General, trace: &mut trace, invocations: 0 };
        match driver.invoke(g, &active, k, state, 0).unwrap() {
            Outcome::Found(m) => {
                assert_eq!(m.len(), k);
                assert!(g.is_rainbow_matching(&m).unwrap());
                (m, trace)
            }
            Outcome::Violation { vertex, .. } => panic!("violation at {vertex}"),
        }
    }

    fn single_colour_part(g: &EdgeColouredGraph, base: Vertex) -> Adapter {
        adapter_from_parallel_pairs(g, &[(base, base + 1)], &[base + 2], base + 3).unwrap()
    }

    /// k = 10 on 37 vertices: a two-colour adapter on 0..7, six one-colour
    /// adapters on 7..31 and a remainder 31..37 too small to extend in.
    /// Vertices 33..36 see every part colour and nothing else outside U.
    /// With `escalate`, vertex 33 reaches colour 3 only through the first
    /// adapter, so the recursive call reports it.
    fn recursion_instance(escalate: bool) -> (EdgeColouredGraph, PartitionState) {
        let mut b = Builder::default();
        for (u, v, c) in [(0, 1, 1), (2, 6, 1), (3, 4, 2), (5, 6, 2)] {
            b.add(u, v, c);
        }
        for j in 3..=8u32 {
            let base = 7 + 4 * (j as usize - 3);
            b.add(base, base + 1, j);
            b.add(base + 2, base + 3, j);
        }
        b.add(31, 32, 9);
        for u in 33..37 {
            b.add(u, 31, 100 + u as u32);
            b.add(u, 32, 200 + u as u32);
            b.add(u, 0, 1);
            b.add(u, 3, 2);
            for j in 3..=8u32 {
                let x = 7 + 4 * (j as usize - 3);
                if escalate && u == 33 && j == 3 {
                    b.add(u, 1, 3);
                } else {
                    b.add(u, x, j);
                }
            }
        }
        b.fill(33);
        let g = b.build(37);
        let mut parts = vec![adapter_from_parallel_pairs(&g, &[(0, 1), (3, 4)], &[2, 5], 6).unwrap()];
        parts.extend((0..6).map(|i| single_colour_part(&g, 7 + 4 * i)));
        let state = PartitionState {
            parts,
            rest: (31..37).collect(),
            rest_matching: Matching { edges: vec![Edge::new(31, 32, 9)] },
        };
        (g, state)
    }

    #[test]
    fn recursion_escalates_and_absorbs() {
        let (g, state) = recursion_instance(true);
        let (_, trace) = run_from(&g, 10, state);
        let actions: Vec<(usize, Action)> = trace.iter().map(|t| (t.depth, t.action)).collect();
        assert_eq!(actions[0], (1, Action::Escalate));
        assert_eq!(actions[1], (0, Action::Recurse));
        assert_eq!(trace[2].params, vec![3]);
        assert_eq!(actions.last(), Some(&(0, Action::Done)));
    }

    #[test]
    fn recursion_finds_matching() {
        let (g, state) = recursion_instance(false);
        let (_, trace) = run_from(&g, 10, state);
        assert!(trace.iter().any(|t| t.depth == 1 && t.action == Action::Done));
        let last = trace.last().unwrap();
        assert_eq!((last.depth, last.action), (0, Action::Done));
        assert!(trace.iter().any(|t| t.depth == 0 && t.action == Action::Recurse));
    }

    /// k = 8 on 30 vertices: six one-colour adapters on 0..24 and a
    /// remainder 24..30. Vertex 26 reaches every part colour at the vertex
    /// `x_j` missed by the first witness, so absorbing around it yields a
    /// six-colour adapter.
    #[test]
    fn absorption_builds_large_adapter() {
        let mut b = Builder::default();
        for j in 1..=6u32 {
            let base = 4 * (j as usize - 1);
            b.add(base, base + 1, j);
            b.add(base + 2, base + 3, j);
        }
        b.add(24, 25, 7);
        for u in 26..30 {
            b.add(u, 24, 100 + u as u32);
            b.add(u, 25, 200 + u as u32);
            for j in 1..=6u32 {
                b.add(u, 4 * (j as usize - 1), j);
            }
        }
        b.fill(26);
        let g = b.build(30);
        let state = PartitionState {
            parts: (0..6).map(|i| single_colour_part(&g, 4 * i)).collect(),
            rest: (24..30).collect(),
            rest_matching: Matching { edges: vec![Edge::new(24, 25, 7)] },
        };
        let (_, trace) = run_from(&g, 8, state);
        assert_eq!(trace[0].action, Action::Absorb);
        assert_eq!(trace[0].params, vec![1; 6]);
        assert_eq!(trace[1].params, vec![6]);
        assert_eq!(trace.last().unwrap().action, Action::Done);
    }

    fn rainbow_complete(n: usize) -> EdgeColouredGraph {
        let mut edges = Vec::new();
        let mut c = 0;
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v, c));
                c += 1;
            }
        }
        EdgeColouredGraph::new(n, edges).unwrap()
    }

    #[test]
    fn k9_rainbow_two() {
        let g = rainbow_complete(9);
        let m = theorem1(&g, 2).unwrap();
        assert_eq!(m.len(), 2);
        assert!(g.is_rainbow_matching(&m).unwrap());
        let m = find_rainbow_matching(&g, 1, Rational::from_integer(3), Family::General).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn theorem1_threshold() {
        let g = rainbow_complete(8);
        match theorem1(&g, 2) {
            Err(ExtendError::TooFewVertices(msg)) => assert!(msg.contains("16 < 18"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_checks() {
        let g = rainbow_complete(12);
        assert!(matches!(
            find_rainbow_matching(&g, 2, Rational::new(5, 2), Family::General),
            Err(ExtendError::BadParameter(_))
        ));
        assert!(matches!(
            find_rainbow_matching(&g, 2, Rational::from_integer(2), Family::General),
            Err(ExtendError::BadParameter(_))
        ));
        assert_eq!(
            find_rainbow_matching(&g, 2, Rational::from_integer(3), Family::Bipartite),
            Err(ExtendError::NotBipartite)
        );
    }

    #[test]
    fn complete_bipartite_theorem2() {
        let m = 6;
        let mut edges = Vec::new();
        let mut c = 0;
        for a in 0..m {
            for b in m..2 * m {
                edges.push((a, b, c));
                c += 1;
            }
        }
        let g = EdgeColouredGraph::new(2 * m, edges).unwrap();
        let r = theorem2(&g, 2, Rational::new(1, 2)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(g.is_rainbow_matching(&r).unwrap());
        // 10 vertices are below (3.5)(2) + 4 = 11
        let small = g.induced(&(0..10).collect());
        let small = EdgeColouredGraph::new(10, small.edges().iter().copied()).unwrap();
        assert!(matches!(theorem2(&small, 2, Rational::new(1, 2)), Err(ExtendError::TooFewVertices(_))));
        assert!(matches!(theorem2(&g, 2, Rational::new(3, 4)), Err(ExtendError::BadParameter(_))));
    }

    #[test]
    fn low_colour_degree_rejected() {
        let mut edges = Vec::new();
        for v in 1..9 {
            edges.push((0, v, 1));
        }
        let g = EdgeColouredGraph::new(9, edges).unwrap();
        assert!(matches!(theorem1(&g, 2), Err(ExtendError::ColourDegree { required: 2, .. })));
    }
}
