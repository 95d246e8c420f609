use serde::Serialize;

use super::{EdgeId, Graph, Vertex};

/// An orientation of every edge of a graph.
///
/// `out_edges[u]` is the set `E(u)` of edges directed away from `u`; these
/// sets partition `E(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    /// `tail[e]` is the vertex edge `e` points away from.
    pub tail: Vec<Vertex>,
    pub out_edges: Vec<Vec<EdgeId>>,
}

impl Orientation {
    pub fn out_degree(&self, u: Vertex) -> usize {
        self.out_edges[u].len()
    }
}

/// Orients `g` so that every vertex has out-degree at least `floor(d(u)/2)`.
///
/// Odd-degree vertices are joined to an auxiliary vertex, every component of
/// the resulting even graph is walked with Hierholzer's algorithm (lowest edge
/// id first), each edge is directed the way the walk crosses it, and the
/// auxiliary edges are dropped again.
pub fn euler_orientation(g: &Graph) -> Orientation {
    let n = g.n();
    let m = g.edge_count();
    let aux = n;

    // Adjacency of G*: real edges keep their ids, auxiliary edges get m, m+1, ...
    let mut adj: Vec<Vec<(Vertex, usize)>> = (0..n).map(|v| g.incident(v).to_vec()).collect();
    adj.push(Vec::new());
    let mut next_id = m;
    for v in 0..n {
        if g.degree(v) % 2 == 1 {
            adj[v].push((aux, next_id));
            adj[aux].push((v, next_id));
            next_id += 1;
        }
    }
    for list in &mut adj {
        list.sort_unstable_by_key(|&(_, id)| id);
    }

    let mut used = vec![false; next_id];
    let mut cursor = vec![0usize; n + 1];
    let mut tail = vec![usize::MAX; m];
    let mut stack: Vec<Vertex> = Vec::new();

    for start in 0..=n {
        stack.push(start);
        while let Some(&u) = stack.last() {
            // Skip edges already walked from the other side.
            while cursor[u] < adj[u].len() && used[adj[u][cursor[u]].1] {
                cursor[u] += 1;
            }
            if let Some(&(w, id)) = adj[u].get(cursor[u]) {
                used[id] = true;
                if id < m {
                    tail[id] = u;
                }
                stack.push(w);
            } else {
                stack.pop();
            }
        }
    }

    let mut out_edges = vec![Vec::new(); n];
    for (id, &t) in tail.iter().enumerate() {
        out_edges[t].push(id);
    }
    Orientation { tail, out_edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_half_degree(g: &Graph, o: &Orientation) {
        let total: usize = o.out_edges.iter().map(Vec::len).sum();
        assert_eq!(total, g.edge_count());
        for u in 0..g.n() {
            assert!(o.out_degree(u) >= g.degree(u) / 2, "vertex {u}");
            for &e in &o.out_edges[u] {
                let (a, b) = g.edge(e);
                assert!(a == u || b == u);
            }
        }
    }

    #[test]
    fn c4_is_cyclic() {
        let g = Graph::cycle(4);
        let o = euler_orientation(&g);
        assert!((0..4).all(|u| o.out_degree(u) == 1));
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let o = euler_orientation(&g);
        assert_eq!(o.out_degree(0) + o.out_degree(1), 1);
    }

    #[test]
    fn k4_odd_degrees() {
        let g = Graph::complete(4);
        let o = euler_orientation(&g);
        assert_half_degree(&g, &o);
        assert!((0..4).all(|u| o.out_degree(u) >= 1));
    }

    #[test]
    fn empty_and_disconnected() {
        let g = Graph::new(3);
        assert!(euler_orientation(&g).out_edges.iter().all(Vec::is_empty));
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (4, 5), (5, 6), (6, 4)]).unwrap();
        assert_half_degree(&g, &euler_orientation(&g));
    }
}
