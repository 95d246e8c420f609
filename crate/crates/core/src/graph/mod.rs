//! Undirected simple graphs with dense edge ids, binomial random graphs and
//! the set queries used throughout the games.

pub mod orientation;

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::rng::{rng_from_seed, GameRng};

pub use orientation::{euler_orientation, Orientation};

pub type Vertex = usize;
pub type EdgeId = usize;

/// An undirected simple graph on the vertices `0..n`.
///
/// Edges carry ids fixed at insertion time; ids are dense in `0..e(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<(Vertex, EdgeId)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;

    fn try_from(r: GraphRepr) -> Result<Self, Self::Error> {
        Graph::from_edges(r.n, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { n: g.n, edges: g.edges }
    }
}

impl Graph {
    /// The empty graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list, keeping the list order as edge ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        let mut seen = HashSet::new();
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            g.push_edge(u, v);
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        Ok(self.push_edge(u, v))
    }

    /// Appends an edge the caller knows to be new and loop-free.
    pub(crate) fn push_edge(&mut self, u: Vertex, v: Vertex) -> EdgeId {
        let id = self.edges.len();
        let (a, b) = (u.min(v), u.max(v));
        self.edges.push((a, b));
        self.adj[a].push((b, id));
        self.adj[b].push((a, id));
        id
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.push_edge(u, v);
            }
        }
        g
    }

    /// The cycle `0-1-...-(n-1)-0`; for `n < 3` this degenerates to a path.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.push_edge(n - 1, 0);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.push_edge(v - 1, v);
        }
        g
    }

    /// The star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::new(leaves + 1);
        for v in 1..=leaves {
            g.push_edge(0, v);
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.push_edge(i, (i + 1) % 5);
            g.push_edge(i, i + 5);
            g.push_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Endpoints of edge `id`, smaller endpoint first.
    pub fn edge(&self, id: EdgeId) -> (Vertex, Vertex) {
        self.edges[id]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    /// `(neighbour, edge id)` pairs at `v`, in insertion order.
    pub fn incident(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let (short, other) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[short].iter().find(|&&(w, _)| w == other).map(|&(_, id)| id)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Spanning subgraph on the given edge ids of `self`; the new graph numbers
    /// its edges in the order of `ids`.
    pub fn subgraph_from_edge_ids(&self, ids: &[EdgeId]) -> Graph {
        let mut g = Graph::new(self.n);
        for &id in ids {
            let (u, v) = self.edges[id];
            g.push_edge(u, v);
        }
        g
    }

    /// `self` plus the non-edge `uv`.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.add_edge(u, v)?;
        Ok(g)
    }

    /// All unordered non-adjacent pairs `u < v`.
    pub fn non_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        let mut mark = vec![false; self.n];
        for u in 0..self.n {
            for w in self.neighbors(u) {
                mark[w] = true;
            }
            for v in u + 1..self.n {
                if !mark[v] {
                    out.push((u, v));
                }
            }
            for w in self.neighbors(u) {
                mark[w] = false;
            }
        }
        out
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    fn membership(&self, set: &[Vertex]) -> Result<Vec<bool>, GraphError> {
        let mut mark = vec![false; self.n];
        for &v in set {
            self.check_vertex(v)?;
            mark[v] = true;
        }
        Ok(mark)
    }

    /// Outer neighbourhood `N(S)`: vertices outside `S` with a neighbour in `S`.
    pub fn neighborhood(&self, set: &[Vertex]) -> Result<Vec<Vertex>, GraphError> {
        let inside = self.membership(set)?;
        let mut hit = vec![false; self.n];
        for &u in set {
            for w in self.neighbors(u) {
                if !inside[w] {
                    hit[w] = true;
                }
            }
        }
        Ok(indices(&hit))
    }

    /// `E(X, Y)` for disjoint `X`, `Y`.
    pub fn edges_between(&self, x: &[Vertex], y: &[Vertex]) -> Result<Vec<EdgeId>, GraphError> {
        let in_x = self.membership(x)?;
        let in_y = self.membership(y)?;
        if let Some(v) = (0..self.n).find(|&v| in_x[v] && in_y[v]) {
            return Err(GraphError::OverlappingSets(v));
        }
        let mut out: Vec<EdgeId> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(_, &(u, v))| (in_x[u] && in_y[v]) || (in_x[v] && in_y[u]))
            .map(|(id, _)| id)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `E(A)`: edges with both endpoints in `A`.
    pub fn edges_within(&self, set: &[Vertex]) -> Result<Vec<EdgeId>, GraphError> {
        let inside = self.membership(set)?;
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|&(_, &(u, v))| inside[u] && inside[v])
            .map(|(id, _)| id)
            .collect())
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let label = self.component_labels();
        let count = label.iter().copied().max().map_or(0, |m| m + 1);
        let mut comps = vec![Vec::new(); count];
        for (v, &c) in label.iter().enumerate() {
            comps[c].push(v);
        }
        comps
    }

    /// Component index of every vertex; components are numbered by their
    /// smallest vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_labels().iter().all(|&c| c == 0)
    }

    /// Edge-list text: a header line `n m`, then one `u v` line per edge in
    /// id order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(12 * (self.edges.len() + 1));
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| GraphError::Parse("missing header".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            edges.push(parse_pair(line)?);
        }
        if edges.len() != m {
            return Err(GraphError::Parse(format!("header says {m} edges, found {}", edges.len())));
        }
        Graph::from_edges(n, edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize), GraphError> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(GraphError::Parse(format!("bad line {line:?}"))),
    }
}

pub(crate) fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|&(_, &b)| b).map(|(i, _)| i).collect()
}

/// Parameters of the binomial random graph `G(n, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomGraphSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl RandomGraphSpec {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::InvalidProbability(p));
        }
        Ok(RandomGraphSpec { n, p, seed })
    }

    /// `p = c log n / n`, clamped to 1.
    pub fn log_scaled(n: usize, c: f64, seed: u64) -> Result<Self, GraphError> {
        RandomGraphSpec::new(n, log_scaled_p(n, c), seed)
    }
}

/// `min(1, c ln n / n)`.
pub fn log_scaled_p(n: usize, c: f64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let nf = n as f64;
    (c * nf.ln() / nf).clamp(0.0, 1.0)
}

/// Samples `G(n, p)`. Pairs are visited in lexicographic order and each is
/// kept independently with probability `p`; gaps between kept pairs are drawn
/// geometrically, so the cost is proportional to the number of edges.
pub fn sample_gnp(spec: &RandomGraphSpec) -> Graph {
    let mut rng = rng_from_seed(spec.seed);
    sample_gnp_with(spec.n, spec.p, &mut rng)
}

pub(crate) fn sample_gnp_with(n: usize, p: f64, rng: &mut GameRng) -> Graph {
    let mut g = Graph::new(n);
    if p <= 0.0 || n < 2 {
        return g;
    }
    if p >= 1.0 {
        return Graph::complete(n);
    }
    let log_q = (1.0 - p).ln();
    // Pair index k enumerates (u, v), u < v, row by row.
    let (mut u, mut v) = (0usize, 0usize);
    loop {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        if !skip.is_finite() {
            break;
        }
        let mut step = skip as u64 + 1;
        // Advance (u, v) by `step` pairs; v == u means "before the row".
        loop {
            let row_left = (n - 1 - v) as u64;
            if step <= row_left {
                v += step as usize;
                break;
            }
            step -= row_left;
            u += 1;
            if u >= n - 1 {
                return g;
            }
            v = u;
        }
        g.push_edge(u, v);
    }
    g
}

/// Result of splitting a board into a main graph and a reservoir.
#[derive(Clone, Debug)]
pub struct ReservoirSplit {
    pub main: Graph,
    pub reservoir: Graph,
    /// Board edge id of every main edge, in the main graph's id order.
    pub main_ids: Vec<EdgeId>,
    /// Board edge id of every reservoir edge.
    pub reservoir_ids: Vec<EdgeId>,
}

/// Places each edge in the reservoir independently with probability `p_bar`.
pub fn split_reservoir(g: &Graph, p_bar: f64, seed: u64) -> Result<ReservoirSplit, GraphError> {
    if !(0.0..=1.0).contains(&p_bar) {
        return Err(GraphError::InvalidProbability(p_bar));
    }
    let mut rng = rng_from_seed(seed);
    let (mut main_ids, mut reservoir_ids) = (Vec::new(), Vec::new());
    for id in 0..g.edge_count() {
        if rng.gen_bool(p_bar) {
            reservoir_ids.push(id);
        } else {
            main_ids.push(id);
        }
    }
    Ok(ReservoirSplit {
        main: g.subgraph_from_edge_ids(&main_ids),
        reservoir: g.subgraph_from_edge_ids(&reservoir_ids),
        main_ids,
        reservoir_ids,
    })
}
