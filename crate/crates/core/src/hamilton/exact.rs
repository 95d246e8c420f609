//! Exact Hamilton-cycle and longest-path solvers for small graphs.

use crate::error::AnalysisError;
use crate::graph::{Graph, Vertex};

/// Largest `n` handled by the subset dynamic programs.
pub const DP_CAP: usize = 20;
/// Largest `n` handled by the backtracking Hamilton-cycle search.
pub const HARD_CAP: usize = 64;

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).fold(0u64, |m, w| m | 1 << w)).collect()
}

/// Cheap necessary conditions for a Hamilton cycle.
fn obviously_not_hamiltonian(g: &Graph) -> bool {
    g.n() < 3 || g.min_degree() < 2 || !g.is_connected()
}

/// `true` iff `g` has a Hamilton cycle. Exact up to [`HARD_CAP`] vertices;
/// larger inputs are refused rather than guessed.
pub fn exact_hamiltonian(g: &Graph) -> Result<bool, AnalysisError> {
    Ok(hamilton_cycle(g)?.is_some())
}

/// A Hamilton cycle as a vertex sequence (the closing edge is implicit).
pub fn hamilton_cycle(g: &Graph) -> Result<Option<Vec<Vertex>>, AnalysisError> {
    let n = g.n();
    if n > HARD_CAP {
        return Err(AnalysisError::SizeCapExceeded { what: "exact Hamiltonicity", n, cap: HARD_CAP });
    }
    if obviously_not_hamiltonian(g) {
        return Ok(None);
    }
    let cycle = if n <= DP_CAP { cycle_by_dp(g) } else { cycle_by_backtracking(g) };
    debug_assert!(cycle.as_ref().is_none_or(|c| is_hamilton_cycle(g, c)));
    Ok(cycle)
}

/// Subset DP: `ends[mask]` holds the possible last vertices of paths that
/// start at vertex 0 and visit exactly `mask`.
fn cycle_by_dp(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    let adj = adjacency_masks(g);
    let full: usize = (1 << n) - 1;
    let mut ends = vec![0u32; 1 << n];
    ends[1] = 1;
    for mask in (1..=full).step_by(2) {
        let mut e = ends[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = adj[v] as usize & !mask;
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    let closing = ends[full] & adj[0] as u32;
    if closing == 0 {
        return None;
    }
    let mut cur = closing.trailing_zeros() as usize;
    let mut mask = full;
    let mut rev = vec![cur];
    while mask != 1 {
        let prev_mask = mask & !(1 << cur);
        let prev = (ends[prev_mask] & adj[cur] as u32).trailing_zeros() as usize;
        rev.push(prev);
        mask = prev_mask;
        cur = prev;
    }
    rev.reverse();
    Some(rev)
}

/// Backtracking search from a minimum-degree vertex, trying low-degree
/// neighbours first, with degree, connectivity and forced-move pruning.
pub fn cycle_by_backtracking(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    assert!(n <= HARD_CAP);
    if obviously_not_hamiltonian(g) {
        return None;
    }
    let adj = adjacency_masks(g);
    let start = (0..n).min_by_key(|&v| g.degree(v)).unwrap_or(0);
    let mut order: Vec<Vec<Vertex>> = (0..n)
        .map(|v| {
            let mut nb: Vec<Vertex> = g.neighbors(v).collect();
            nb.sort_by_key(|&w| (g.degree(w), w));
            nb
        })
        .collect();
    for list in &mut order {
        list.dedup();
    }
    let all: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Backtrack { adj: &adj, order: &order, start, path: vec![start] };
    if search.extend(all & !(1 << start)) {
        Some(search.path)
    } else {
        None
    }
}

struct Backtrack<'a> {
    adj: &'a [u64],
    order: &'a [Vec<Vertex>],
    start: Vertex,
    path: Vec<Vertex>,
}

impl Backtrack<'_> {
    fn extend(&mut self, unvisited: u64) -> bool {
        let end = *self.path.last().expect("path is never empty");
        if unvisited == 0 {
            return self.adj[end] & (1 << self.start) != 0;
        }
        let open = unvisited | 1 << end | 1 << self.start;
        // Every unvisited vertex needs two usable neighbours; a vertex next to
        // `end` with exactly two must be visited now.
        let mut forced = None;
        let mut bits = unvisited;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let avail = (self.adj[w] & open).count_ones();
            if avail < 2 {
                return false;
            }
            if avail == 2 && self.adj[w] & (1 << end) != 0 && end != self.start {
                if forced.is_some() {
                    return false;
                }
                forced = Some(w);
            }
        }
        if self.adj[self.start] & unvisited == 0 || !connected_through(self.adj, unvisited, end) {
            return false;
        }
        let candidates: Vec<Vertex> = match forced {
            Some(w) => vec![w],
            None => self.order[end].iter().copied().filter(|&w| unvisited & (1 << w) != 0).collect(),
        };
        for w in candidates {
            self.path.push(w);
            if self.extend(unvisited & !(1 << w)) {
                return true;
            }
            self.path.pop();
        }
        false
    }
}

/// Whether `set ∪ {from}` is connected in the subgraph it induces.
fn connected_through(adj: &[u64], set: u64, from: Vertex) -> bool {
    let within = set | 1 << from;
    let mut seen = 1u64 << from;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & within & !seen;
        seen |= new;
        frontier |= new;
    }
    seen & within == within
}

/// A longest path of `g` (as a vertex sequence), computed exactly.
pub fn longest_path(g: &Graph) -> Result<Vec<Vertex>, AnalysisError> {
    let n = g.n();
    if n > DP_CAP {
        return Err(AnalysisError::SizeCapExceeded { what: "exact longest path", n, cap: DP_CAP });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let adj = adjacency_masks(g);
    let mut ends = vec![0u32; 1 << n];
    let mut best = 1usize;
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for mask in 1..(1usize << n) {
        let mut e = ends[mask];
        if e == 0 {
            continue;
        }
        if mask.count_ones() > best.count_ones() {
            best = mask;
        }
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = adj[v] as usize & !mask;
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    let mut cur = ends[best].trailing_zeros() as usize;
    let mut mask = best;
    let mut path = vec![cur];
    while mask.count_ones() > 1 {
        let prev_mask = mask & !(1 << cur);
        let prev = (ends[prev_mask] & adj[cur] as u32).trailing_zeros() as usize;
        path.push(prev);
        mask = prev_mask;
        cur = prev;
    }
    Ok(path)
}

/// Number of vertices on a longest path.
pub fn longest_path_len(g: &Graph) -> Result<usize, AnalysisError> {
    Ok(longest_path(g)?.len())
}

/// `path` visits distinct vertices joined by consecutive edges of `g`.
pub fn is_simple_path(g: &Graph, path: &[Vertex]) -> bool {
    let mut seen = vec![false; g.n()];
    for &v in path {
        if v >= g.n() || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    path.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

/// `cycle` lists all `n` vertices once and closes up in `g`.
pub fn is_hamilton_cycle(g: &Graph, cycle: &[Vertex]) -> bool {
    cycle.len() == g.n()
        && g.n() >= 3
        && is_simple_path(g, cycle)
        && g.has_edge(cycle[0], cycle[cycle.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!(exact_hamiltonian(&Graph::cycle(5)).unwrap());
        assert!(!exact_hamiltonian(&Graph::star(3)).unwrap());
        assert!(!exact_hamiltonian(&Graph::petersen()).unwrap());
        assert!(exact_hamiltonian(&Graph::complete(20)).unwrap());
        assert!(cycle_by_backtracking(&Graph::complete(30)).is_some());
        assert!(cycle_by_backtracking(&Graph::petersen()).is_none());
        assert!(matches!(
            exact_hamiltonian(&Graph::cycle(65)),
            Err(AnalysisError::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn longest_paths() {
        assert_eq!(longest_path_len(&Graph::star(3)).unwrap(), 3);
        assert_eq!(longest_path_len(&Graph::path(6)).unwrap(), 6);
        assert_eq!(longest_path_len(&Graph::new(4)).unwrap(), 1);
        assert_eq!(longest_path_len(&Graph::petersen()).unwrap(), 10);
        let p = longest_path(&Graph::petersen()).unwrap();
        assert!(is_simple_path(&Graph::petersen(), &p));
    }
}
