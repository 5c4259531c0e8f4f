use std::collections::BTreeMap;

use crate::decompose::sharpness_instance;
use crate::graph::{Colour, Edge, EdgeColouredGraph, Vertex};

use super::{GenError, GenSpec, Model, Rng};

type EdgeMap = BTreeMap<(Vertex, Vertex), Colour>;

pub fn generate(spec: &GenSpec) -> Result<EdgeColouredGraph, GenError> {
    let n = spec.n;
    let mut rng = Rng::new(spec.seed);
    let p = spec.edge_probability();
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::Unsatisfiable(format!("edge probability {p} is outside [0, 1]")));
    }
    let colours = spec.colour_count();
    let all_pairs = |_: Vertex, _: Vertex| true;

    let edges = match spec.model {
        Model::Uniform => uniform(&mut rng, n, p, colours, all_pairs),
        Model::MinColourDegree => {
            let k = spec.k.ok_or(GenError::MissingParameter("k"))?;
            if k >= n {
                return Err(GenError::Unsatisfiable(format!("colour degree {k} needs more than {n} vertices")));
            }
            let mut edges = uniform(&mut rng, n, p, colours, all_pairs);
            repair(&mut rng, n, k, &mut edges, all_pairs);
            edges
        }
        Model::Proper => {
            let plain = uniform(&mut rng, n, p, 1, all_pairs);
            return Ok(proper_colouring(n, plain.keys().copied()));
        }
        Model::Bipartite => {
            let a = n.div_ceil(2);
            let crossing = move |u: Vertex, v: Vertex| (u < a) != (v < a);
            let mut edges = uniform(&mut rng, n, p, colours, crossing);
            if let Some(k) = spec.k {
                if k > n - a {
                    return Err(GenError::Unsatisfiable(format!(
                        "colour degree {k} exceeds the smaller side of size {}",
                        n - a
                    )));
                }
                repair(&mut rng, n, k, &mut edges, crossing);
            }
            edges
        }
        Model::Sharpness => {
            let t = spec.t.ok_or(GenError::MissingParameter("t"))?;
            return sharpness_instance(t, n).map_err(|e| GenError::Unsatisfiable(e.to_string()));
        }
        Model::MonoBudget => {
            let t = spec.t.ok_or(GenError::MissingParameter("t"))?;
            let mut edges = uniform(&mut rng, n, p, colours, all_pairs);
            trim_colour_degrees(n, t, &mut edges);
            edges
        }
    };
    Ok(build(n, &edges))
}

fn build(n: usize, edges: &EdgeMap) -> EdgeColouredGraph {
    EdgeColouredGraph::new(n, edges.iter().map(|(&(u, v), &c)| (u, v, c))).expect("generated edges are simple")
}

/// Each allowed pair in lexicographic order is kept with probability `p`
/// and given a colour uniform in `1..=colours`.
fn uniform(rng: &mut Rng, n: usize, p: f64, colours: u32, allowed: impl Fn(Vertex, Vertex) -> bool) -> EdgeMap {
    let mut edges = EdgeMap::new();
    for u in 0..n {
        for v in u + 1..n {
            if allowed(u, v) && rng.chance(p) {
                edges.insert((u, v), 1 + rng.below(colours as u64) as Colour);
            }
        }
    }
    edges
}

fn colours_at(edges: &EdgeMap, v: Vertex) -> BTreeMap<Colour, Vec<(Vertex, Vertex)>> {
    let mut at: BTreeMap<Colour, Vec<(Vertex, Vertex)>> = BTreeMap::new();
    for (&(a, b), &c) in edges {
        if a == v || b == v {
            at.entry(c).or_default().push((a, b));
        }
    }
    at
}

/// Raises every colour degree to at least `k`. A deficient vertex gets an
/// edge in a globally fresh colour to a uniformly chosen allowed
/// non-neighbour; with none left, an edge whose colour repeats at the vertex
/// is recoloured fresh. Both moves strictly increase the total colour
/// degree, so the loop terminates.
fn repair(rng: &mut Rng, n: usize, k: usize, edges: &mut EdgeMap, allowed: impl Fn(Vertex, Vertex) -> bool) {
    let mut fresh = edges.values().max().map_or(1, |c| c + 1);
    loop {
        let mut changed = false;
        for v in 0..n {
            loop {
                let at = colours_at(edges, v);
                if at.len() >= k {
                    break;
                }
                let options: Vec<Vertex> = (0..n)
                    .filter(|&x| x != v && allowed(v.min(x), v.max(x)) && !edges.contains_key(&(v.min(x), v.max(x))))
                    .collect();
                let key = if options.is_empty() {
                    let repeated: Vec<(Vertex, Vertex)> =
                        at.values().filter(|es| es.len() > 1).flat_map(|es| es[1..].iter().copied()).collect();
                    repeated[rng.index(repeated.len())]
                } else {
                    let x = options[rng.index(options.len())];
                    (v.min(x), v.max(x))
                };
                edges.insert(key, fresh);
                fresh += 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Deletes edges until no colour class has degree above `t`, visiting
/// colours from highest to lowest and dropping the latest edges first.
fn trim_colour_degrees(n: usize, t: usize, edges: &mut EdgeMap) {
    let mut classes: BTreeMap<Colour, Vec<(Vertex, Vertex)>> = BTreeMap::new();
    for (&key, &c) in edges.iter() {
        classes.entry(c).or_default().push(key);
    }
    for class in classes.values().rev() {
        let mut degree = vec![0usize; n];
        for &(u, v) in class {
            degree[u] += 1;
            degree[v] += 1;
        }
        for &(u, v) in class.iter().rev() {
            if degree[u] > t || degree[v] > t {
                edges.remove(&(u, v));
                degree[u] -= 1;
                degree[v] -= 1;
            }
        }
    }
}

/// Misra–Gries: a proper colouring with at most Δ+1 colours, numbered
/// from 1.
pub fn proper_colouring(n: usize, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> EdgeColouredGraph {
    let pairs: Vec<(Vertex, Vertex)> = pairs.into_iter().collect();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &pairs {
        adj[u].push(v);
        adj[v].push(u);
    }
    let delta = adj.iter().map(Vec::len).max().unwrap_or(0);
    let mut col: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];

    let is_free = |col: &Vec<Vec<Option<usize>>>, v: Vertex, c: usize| adj[v].iter().all(|&w| col[v][w] != Some(c));
    let first_free = |col: &Vec<Vec<Option<usize>>>, v: Vertex| (0..=delta).find(|&c| is_free(col, v, c)).unwrap();

    for &(u, v) in &pairs {
        // Maximal fan at u starting from v.
        let mut fan = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let next = adj[u]
                .iter()
                .copied()
                .filter(|w| !fan.contains(w))
                .find(|&w| col[u][w].is_some_and(|c| is_free(&col, last, c)));
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = first_free(&col, u);
        let d = first_free(&col, *fan.last().unwrap());

        // Swap c and d on the cd-path starting at u.
        let mut path = Vec::new();
        let (mut x, mut prev, mut want) = (u, usize::MAX, d);
        while let Some(y) = adj[x].iter().copied().find(|&y| y != prev && col[x][y] == Some(want)) {
            path.push((x, y));
            prev = x;
            x = y;
            want = if want == d { c } else { d };
        }
        for &(a, b) in &path {
            let new = if col[a][b] == Some(c) { d } else { c };
            col[a][b] = Some(new);
            col[b][a] = Some(new);
        }

        let mut end = 0;
        while !is_free(&col, fan[end], d) {
            let valid = col[u][fan[end + 1]].is_some_and(|cc| is_free(&col, fan[end], cc));
            assert!(valid, "fan prefix broken");
            end += 1;
        }
        for j in 0..end {
            let cc = col[u][fan[j + 1]];
            col[u][fan[j]] = cc;
            col[fan[j]][u] = cc;
        }
        col[u][fan[end]] = Some(d);
        col[fan[end]][u] = Some(d);
    }

    let edges = pairs.iter().map(|&(u, v)| Edge::new(u, v, col[u][v].unwrap() as Colour + 1));
    EdgeColouredGraph::new(n, edges).expect("generated edges are simple")
}
