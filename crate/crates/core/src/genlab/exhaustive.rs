use serde::{Deserialize, Serialize};

use crate::adapter::{adapter_absorb, adapter_from_parallel_pairs, adapter_union, Adapter};
use crate::extend::{bipartite_extend, general_extend};
use crate::graph::{Colour, Edge, EdgeColouredGraph, Matching, Vertex};

use super::{GenError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statement {
    #[serde(rename = "adapter_props")]
    AdapterProps,
    #[serde(rename = "L_general_small")]
    LGeneralSmall,
    #[serde(rename = "P_bipartite_small")]
    PBipartiteSmall,
}

/// Enumeration bounds: graphs on at most `max_n` vertices with colours
/// from `1..=max_colours`, matchings of size `k − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_n: usize,
    pub k: usize,
    pub max_colours: u32,
    pub budget: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_n: 6, k: 2, max_colours: 3, budget: 5_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub statement: Statement,
    pub outcome: Outcome,
    /// Instances that met the hypotheses and were checked.
    pub cases: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Runs the constructive statement on every instance within `limits`.
/// Colourings are enumerated up to renaming of colours.
pub fn exhaustive_check(statement: Statement, limits: &Limits) -> Result<ExhaustiveReport, GenError> {
    let result = match statement {
        Statement::AdapterProps => adapter_props(),
        Statement::LGeneralSmall => {
            let k = limits.k.max(1);
            let layouts = (3 * (k - 1) + 1..=limits.max_n)
                .map(|n| (n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()))
                .collect();
            extension_small(limits, layouts, |g, m| general_extend(g, m, k))
        }
        Statement::PBipartiteSmall => {
            let k = limits.k.max(1);
            let mut layouts = Vec::new();
            for n in 2 * k..=limits.max_n {
                for a in 1..=n / 2 {
                    let pairs = (0..a).flat_map(|u| (a..n).map(move |v| (u, v))).collect();
                    layouts.push((n, pairs));
                }
            }
            extension_small(limits, layouts, |g, m| bipartite_extend(g, m, k))
        }
    }?;
    let (cases, counterexample) = result;
    let outcome = if counterexample.is_some() { Outcome::Failed } else { Outcome::Verified };
    Ok(ExhaustiveReport { statement, outcome, cases, counterexample })
}

type Found = Result<(u64, Option<String>), GenError>;

/// Vertex lists in all orders.
fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// `roles = [x_1, y_1, z_1, …, w]`, colours `first, first+1, …`.
fn gadget_edges(roles: &[Vertex], first: Colour) -> Vec<Edge> {
    let l = roles.len() / 3;
    let w = roles[3 * l];
    (0..l)
        .flat_map(|i| {
            let c = first + i as Colour;
            [Edge::new(roles[3 * i], roles[3 * i + 1], c), Edge::new(roles[3 * i + 2], w, c)]
        })
        .collect()
}

fn gadget(g: &EdgeColouredGraph, roles: &[Vertex]) -> Result<Adapter, String> {
    let l = roles.len() / 3;
    let pairs: Vec<(Vertex, Vertex)> = (0..l).map(|i| (roles[3 * i], roles[3 * i + 1])).collect();
    let zs: Vec<Vertex> = (0..l).map(|i| roles[3 * i + 2]).collect();
    adapter_from_parallel_pairs(g, &pairs, &zs, roles[3 * l]).map_err(|e| format!("roles {roles:?}: {e}"))
}

fn well_formed(a: &Adapter, g: &EdgeColouredGraph) -> bool {
    let l = a.colours.len();
    a.verify(g) && a.vertices.len() == 3 * l + 1 && a.level() == l + 1
}

fn adapter_props() -> Found {
    let mut cases = 0;
    let found = adapter_cases(&mut cases).err();
    Ok((cases, found))
}

/// Counts checked constructions; the error is the first failure.
fn adapter_cases(cases: &mut u64) -> Result<(), String> {
    // Parallel pairs for ℓ = 1, 2 under every role assignment.
    for l in 1..=2 {
        let vertices: Vec<Vertex> = (0..3 * l + 1).collect();
        for roles in permutations(&vertices) {
            let g = EdgeColouredGraph::new(vertices.len(), gadget_edges(&roles, 1)).expect("gadget is simple");
            let a = gadget(&g, &roles)?;
            *cases += 1;
            if !well_formed(&a, &g) {
                return Err(format!("parallel pairs, roles {roles:?}"));
            }
        }
    }

    // Union of two single-colour adapters under every pair of role
    // assignments.
    let left = permutations(&[0, 1, 2, 3]);
    let right = permutations(&[4, 5, 6, 7]);
    for ra in &left {
        for rb in &right {
            let mut edges = gadget_edges(ra, 1);
            edges.extend(gadget_edges(rb, 2));
            let g = EdgeColouredGraph::new(8, edges).expect("gadgets are disjoint");
            let (a, b) = (gadget(&g, ra)?, gadget(&g, rb)?);
            let u = adapter_union(&[a, b]).map_err(|e| e.to_string())?;
            *cases += 1;
            let sizes_ok = u.vertices.len() == 8 && u.colours.len() == 2 && u.level() == 2;
            if !u.verify(&g) || !sizes_ok {
                return Err(format!("union, roles {ra:?} and {rb:?}"));
            }
        }
    }

    // Absorbing three new vertices through every vertex w of the adapter.
    for l in 1..=2 {
        let base: Vec<Vec<Vertex>> = if l == 1 { permutations(&[0, 1, 2, 3]) } else { vec![(0..7).collect()] };
        let fresh: Vec<Vertex> = (3 * l + 1..3 * l + 4).collect();
        for roles in &base {
            for &w in &roles[..] {
                for xyz in permutations(&fresh) {
                    let c = l as Colour + 1;
                    let mut edges = gadget_edges(roles, 1);
                    edges.push(Edge::new(xyz[0], xyz[1], c));
                    edges.push(Edge::new(xyz[2], w, c));
                    let g = EdgeColouredGraph::new(3 * l + 4, edges).expect("gadget is simple");
                    let a = gadget(&g, roles)?;
                    let grown = adapter_absorb(&g, &a, xyz[0], xyz[1], xyz[2], w).map_err(|e| e.to_string())?;
                    *cases += 1;
                    let deltas_ok = grown.vertices.len() == a.vertices.len() + 3
                        && grown.colours.len() == a.colours.len() + 1
                        && grown.level() == a.level() + 1;
                    if !grown.verify(&g) || !deltas_ok {
                        return Err(format!("absorb, roles {roles:?}, w = {w}, new {xyz:?}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Calls `visit` with every colouring of `pairs` by `0..=colours` (0 means
/// absent) in which colours first appear in increasing order.
fn colourings(pairs: usize, colours: u32, visit: &mut impl FnMut(&[u32]) -> bool) -> bool {
    fn go(pos: usize, used: u32, colours: u32, digits: &mut Vec<u32>, visit: &mut impl FnMut(&[u32]) -> bool) -> bool {
        if pos == digits.len() {
            return visit(digits);
        }
        for d in 0..=colours.min(used + 1) {
            digits[pos] = d;
            if !go(pos + 1, used.max(d), colours, digits, visit) {
                return false;
            }
        }
        true
    }
    let mut digits = vec![0; pairs];
    go(0, 0, colours, &mut digits, visit)
}

/// Rainbow matchings of exactly `size` edges.
fn rainbow_matchings(g: &EdgeColouredGraph, size: usize) -> Vec<Matching> {
    fn go(edges: &[Edge], from: usize, size: usize, current: &mut Vec<Edge>, out: &mut Vec<Matching>) {
        if current.len() == size {
            out.push(Matching { edges: current.clone() });
            return;
        }
        for i in from..edges.len() {
            let e = edges[i];
            if current.iter().all(|f| !f.shares_vertex(&e) && f.colour != e.colour) {
                current.push(e);
                go(edges, i + 1, size, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g.edges(), 0, size, &mut Vec::new(), &mut out);
    out
}

fn extension_small<F, E>(limits: &Limits, layouts: Vec<(usize, Vec<(Vertex, Vertex)>)>, extend: F) -> Found
where
    F: Fn(&EdgeColouredGraph, &Matching) -> Result<crate::extend::ExtensionResult, E>,
    E: std::fmt::Display,
{
    let k = limits.k.max(1);
    let estimate: u128 = layouts
        .iter()
        .map(|(_, pairs)| (limits.max_colours as u128 + 1).saturating_pow(pairs.len() as u32))
        .fold(0u128, |a, b| a.saturating_add(b));
    if estimate > limits.budget {
        return Err(GenError::TooLarge { estimate, budget: limits.budget });
    }

    let mut cases = 0u64;
    let mut counterexample = None;
    for (n, pairs) in &layouts {
        let n = *n;
        colourings(pairs.len(), limits.max_colours, &mut |digits| {
            let edges = pairs.iter().zip(digits).filter(|(_, &d)| d > 0).map(|(&(u, v), &d)| Edge::new(u, v, d));
            let g = EdgeColouredGraph::new(n, edges).expect("distinct pairs");
            let low: Vec<Vertex> = (0..n).filter(|&v| g.colours_at(v).len() < k).collect();
            if low.len() > 2 * (k - 1) {
                return true;
            }
            for m in rainbow_matchings(&g, k - 1) {
                if low.iter().any(|&v| !m.covers(v)) {
                    continue;
                }
                cases += 1;
                let ok = match extend(&g, &m) {
                    Ok(r) => r.is_valid(&g, k),
                    Err(e) => {
                        counterexample = Some(format!("{g:?} with {m:?}: {e}"));
                        return false;
                    }
                };
                if !ok {
                    counterexample = Some(format!("{g:?} with {m:?}: invalid extension"));
                    return false;
                }
            }
            true
        });
        if counterexample.is_some() {
            break;
        }
    }
    Ok((cases, counterexample))
}
