//! Small directed multigraphs up to isomorphism.

use std::collections::BTreeSet;

use crate::globular::GlobularSet;

const VERTEX_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Sorted edge list, the canonical form under a fixed vertex numbering.
type Edges = Vec<(usize, usize)>;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Least relabelling of the edge multiset over all vertex permutations.
fn canonical(n: usize, edges: &Edges) -> Edges {
    permutations(n)
        .into_iter()
        .map(|p| {
            let mut e: Edges = edges.iter().map(|&(s, t)| (p[s], p[t])).collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
}

/// `v<n>` followed by the edges, e.g. `v2:01,11`.
pub fn graph_name(n: usize, edges: &[(usize, usize)]) -> String {
    let es: Vec<String> = edges.iter().map(|(s, t)| format!("{s}{t}")).collect();
    format!("v{n}:{}", es.join(","))
}

/// Every graph with at most `max_vertices` vertices and `max_edges` edges,
/// one per isomorphism class, with a name. Vertices are `a`, `b`, …; edges
/// are `e0`, `e1`, ….
pub fn small_graphs(max_vertices: usize, max_edges: usize) -> Vec<(String, GlobularSet)> {
    assert!(max_vertices <= VERTEX_NAMES.len(), "at most {} vertices", VERTEX_NAMES.len());
    let mut out = Vec::new();
    for n in 0..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
        let mut seen: BTreeSet<Edges> = BTreeSet::new();
        let mut multisets = Vec::new();
        multisets_of(&pairs, 0, max_edges, &mut Vec::new(), &mut multisets);
        for m in multisets {
            seen.insert(canonical(n, &m));
        }
        for edges in seen {
            let vertices: Vec<String> = VERTEX_NAMES[..n].iter().map(|s| s.to_string()).collect();
            let named: Vec<(String, usize, usize)> = edges.iter().enumerate().map(|(i, &(s, t))| (format!("e{i}"), s, t)).collect();
            out.push((graph_name(n, &edges), GlobularSet::graph(&vertices, &named)));
        }
    }
    out
}

/// Nondecreasing sequences over `pairs[from..]` of length at most `left`.
fn multisets_of(pairs: &[(usize, usize)], from: usize, left: usize, cur: &mut Edges, out: &mut Vec<Edges>) {
    out.push(cur.clone());
    if left == 0 {
        return;
    }
    for i in from..pairs.len() {
        cur.push(pairs[i]);
        multisets_of(pairs, i, left - 1, cur, out);
        cur.pop();
    }
}
