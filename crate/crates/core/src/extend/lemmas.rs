use crate::graph::{Colour, ColourSet, Edge, EdgeColouredGraph, Matching, Vertex, VertexSet};

use super::{ExtendError, ExtensionResult, Family};

fn all_vertices(g: &EdgeColouredGraph) -> VertexSet {
    (0..g.n()).collect()
}

/// `m` is a rainbow matching of size k−1 inside `active`. Returns the
/// active vertices it misses.
fn check_matching(
    g: &EdgeColouredGraph,
    active: &VertexSet,
    m: &Matching,
    k: usize,
) -> Result<Vec<Vertex>, ExtendError> {
    if k == 0 {
        return Err(ExtendError::BadParameter("k must be at least 1".into()));
    }
    if m.len() + 1 != k {
        return Err(ExtendError::InvalidMatching(format!("size {} but k−1 = {}", m.len(), k - 1)));
    }
    if !g.is_rainbow_matching(m)? {
        return Err(ExtendError::InvalidMatching("not a rainbow matching".into()));
    }
    if let Some(e) = m.iter().find(|e| !active.contains(&e.u) || !active.contains(&e.v)) {
        return Err(ExtendError::InvalidMatching(format!("edge {{{}, {}}} leaves the vertex set", e.u, e.v)));
    }
    Ok(active.iter().copied().filter(|&v| !m.covers(v)).collect())
}

fn check_colour_degree(g: &EdgeColouredGraph, z: Vertex, k: usize) -> Result<(), ExtendError> {
    let degree = g.colours_at(z).len();
    if degree < k {
        return Err(ExtendError::ColourDegree { vertex: z, degree, required: k });
    }
    Ok(())
}

/// Bipartite case: some vertex outside `m` has a neighbour outside `m`,
/// because `m` covers only k−1 vertices on each side. Only the first
/// vertex missed by `m` is used, so only its colour degree is checked.
pub fn bipartite_extend(g: &EdgeColouredGraph, m: &Matching, k: usize) -> Result<ExtensionResult, ExtendError> {
    bipartite_extend_on(g, &all_vertices(g), m, k)
}

pub(crate) fn bipartite_extend_on(
    g: &EdgeColouredGraph,
    active: &VertexSet,
    m: &Matching,
    k: usize,
) -> Result<ExtensionResult, ExtendError> {
    if g.bipartition().is_none() {
        return Err(ExtendError::NotBipartite);
    }
    if active.len() < 2 * k {
        return Err(ExtendError::TooFewVertices(format!("|G| ≥ 2k: {} < {}", active.len(), 2 * k)));
    }
    let outside = check_matching(g, active, m, k)?;
    let z = outside[0];
    check_colour_degree(g, z, k)?;
    let edge = g
        .incident(z)
        .find(|e| !m.covers(e.other(z)))
        .ok_or_else(|| ExtendError::Internal(format!("vertex {z} has no neighbour outside the matching")))?;
    Ok(ExtensionResult { matching: m.clone(), edge })
}

/// One link of the chain built by [`general_extend`]: the matching edge
/// `xy` and the edge `yz` joining it to an unmatched vertex.
#[derive(Debug, Clone, Copy)]
struct Link {
    xy: Edge,
    yz: Edge,
}

/// Rainbow matching on the vertices of `links` avoiding `colour` and the
/// colours of all matching edges not yet linked. `links` is ordered from
/// the highest position down, so it is walked in reverse.
fn chain_matching(links: &[Link], mut colour: Colour) -> Vec<Edge> {
    let mut out = Vec::with_capacity(links.len());
    for link in links.iter().rev() {
        if link.xy.colour != colour {
            out.push(link.xy);
        } else {
            out.push(link.yz);
            colour = link.yz.colour;
        }
    }
    out
}

/// General graphs on at least 3(k−1)+1 vertices.
///
/// If the vertices missed by `m` span an edge, that edge is returned with
/// `m`. Otherwise matching edges are linked one at a time, highest
/// position first, each to a fresh unmatched vertex `z` through an edge of
/// a colour that none of the unlinked matching edges carry. The first
/// unmatched vertex adjacent to the far endpoint `x` of a new link yields
/// the result; the colour-degree condition guarantees this happens before
/// the chain is exhausted.
pub fn general_extend(g: &EdgeColouredGraph, m: &Matching, k: usize) -> Result<ExtensionResult, ExtendError> {
    general_extend_on(g, &all_vertices(g), m, k)
}

pub(crate) fn general_extend_on(
    g: &EdgeColouredGraph,
    active: &VertexSet,
    m: &Matching,
    k: usize,
) -> Result<ExtensionResult, ExtendError> {
    let need = 3 * k.saturating_sub(1) + 1;
    if active.len() < need {
        return Err(ExtendError::TooFewVertices(format!("|G| ≥ 3(k−1)+1: {} < {}", active.len(), need)));
    }
    let outside = check_matching(g, active, m, k)?;
    for &z in &outside {
        check_colour_degree(g, z, k)?;
    }
    let outside_set: VertexSet = outside.iter().copied().collect();

    if let Some(&edge) = g.edges().iter().find(|e| outside_set.contains(&e.u) && outside_set.contains(&e.v)) {
        return Ok(ExtensionResult { matching: m.clone(), edge });
    }

    let mut unlinked: Vec<Edge> = m.edges.clone();
    let mut links: Vec<Link> = Vec::with_capacity(unlinked.len());
    let mut used = VertexSet::new();

    while !unlinked.is_empty() {
        let z = *outside_set
            .iter()
            .find(|v| !used.contains(v))
            .ok_or_else(|| ExtendError::Internal("ran out of unmatched vertices".into()))?;
        let low: ColourSet = unlinked.iter().map(|e| e.colour).collect();
        let (yz, pos) = g
            .incident(z)
            .filter(|e| !low.contains(&e.colour))
            .filter_map(|e| {
                let u = e.other(z);
                unlinked.iter().position(|f| f.touches(u)).map(|p| (e, p))
            })
            .min_by_key(|(e, _)| e.other(z))
            .ok_or_else(|| ExtendError::Internal(format!("vertex {z} has no usable edge into the matching")))?;
        let xy = unlinked.remove(pos);
        let y = yz.other(z);
        let x = xy.other(y);
        links.push(Link { xy, yz });
        used.insert(z);

        let hit = outside_set.iter().find(|w| !used.contains(w) && g.edge(**w, x).is_some());
        if let Some(&w) = hit {
            let last = links.len() - 1;
            let mut edges = unlinked.clone();
            edges.extend(chain_matching(&links[..last], yz.colour));
            edges.push(yz);
            let edge = g.edge(w, x).expect("edge found above");
            return Ok(ExtensionResult { matching: Matching { edges }, edge });
        }
    }
    Err(ExtendError::Internal("linked every matching edge; a leftover vertex has colour degree below k".into()))
}

pub fn extend_dispatch(
    g: &EdgeColouredGraph,
    m: &Matching,
    k: usize,
    family: Family,
) -> Result<ExtensionResult, ExtendError> {
    extend_dispatch_on(g, &all_vertices(g), m, k, family)
}

pub(crate) fn extend_dispatch_on(
    g: &EdgeColouredGraph,
    active: &VertexSet,
    m: &Matching,
    k: usize,
    family: Family,
) -> Result<ExtensionResult, ExtendError> {
    match family {
        Family::General => general_extend_on(g, active, m, k),
        Family::Bipartite => bipartite_extend_on(g, active, m, k),
    }
}
