//! Boosters: non-edges whose addition makes a graph Hamiltonian or
//! lengthens its longest path.

use std::collections::BTreeSet;

use serde::Serialize;

use super::exact::{self, DP_CAP};
use super::posa::{grow_path, rotation_endpoints};
use crate::error::AnalysisError;
use crate::graph::{Graph, Vertex};
use crate::rng::rng_from_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    PosaCertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoosterSet {
    /// Sorted pairs `(u, v)` with `u < v`.
    pub pairs: Vec<(Vertex, Vertex)>,
    pub exactness: Exactness,
    /// Length (in vertices) of the path the certificate was derived from.
    pub path_len: usize,
}

impl BoosterSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.pairs.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

/// Every booster of a non-Hamiltonian graph, by recomputing the longest path
/// of `G + uv` for each non-edge.
pub fn boosters_exact(g: &Graph) -> Result<BoosterSet, AnalysisError> {
    if g.n() > DP_CAP {
        return Err(AnalysisError::SizeCapExceeded { what: "exact boosters", n: g.n(), cap: DP_CAP });
    }
    if exact::exact_hamiltonian(g)? {
        return Err(AnalysisError::HamiltonianInput);
    }
    let base = exact::longest_path_len(g)?;
    let mut pairs = Vec::new();
    for (u, v) in g.non_edges() {
        let h = g.with_edge(u, v)?;
        let boosted = if base == g.n() { exact::exact_hamiltonian(&h)? } else { exact::longest_path_len(&h)? > base };
        if boosted {
            pairs.push((u, v));
        }
    }
    Ok(BoosterSet { pairs, exactness: Exactness::Exact, path_len: base })
}

/// Boosters certified by rotations of a longest path.
///
/// For `n` up to the exact cap the starting path is an exact longest path,
/// which makes every returned pair a true booster. Above the cap the path
/// comes from rotation-extension and the pairs are certified relative to it.
/// `rotation_budget` bounds how many rotated paths are used as secondary
/// starting points.
pub fn boosters_posa(g: &Graph, seed: u64, rotation_budget: usize) -> Result<BoosterSet, AnalysisError> {
    let n = g.n();
    let path = if n <= DP_CAP {
        if exact::exact_hamiltonian(g)? {
            return Err(AnalysisError::HamiltonianInput);
        }
        exact::longest_path(g)?
    } else {
        let mut rng = rng_from_seed(seed);
        let start = (0..n).max_by_key(|&v| g.degree(v)).unwrap_or(0);
        match grow_path(g, vec![start], &mut rng) {
            (Some(_), _) => return Err(AnalysisError::HamiltonianInput),
            (None, p) => p,
        }
    };
    Ok(certify_from_path(g, &path, rotation_budget))
}

/// Pairs certified from a path that no rotation can extend.
pub fn certify_from_path(g: &Graph, path: &[Vertex], rotation_budget: usize) -> BoosterSet {
    let n = g.n();
    let mut pairs = BTreeSet::new();
    if path.is_empty() {
        return BoosterSet { pairs: Vec::new(), exactness: Exactness::PosaCertified, path_len: 0 };
    }
    let mut on_path = vec![false; n];
    for &v in path {
        on_path[v] = true;
    }
    // Closing a rotated path into a cycle helps only if the cycle is spanning
    // or some cycle vertex has a neighbour outside it.
    let closing_helps = path.len() == n || path.iter().any(|&x| g.neighbors(x).any(|y| !on_path[y]));
    let off_path: Vec<Vertex> = (0..n).filter(|&v| !on_path[v]).collect();

    let add_from = |fixed: Vertex, ends: &[Vertex], pairs: &mut BTreeSet<(Vertex, Vertex)>| {
        for &e in ends {
            if closing_helps && e != fixed && !g.has_edge(fixed, e) {
                pairs.insert((fixed.min(e), fixed.max(e)));
            }
            for &x in &off_path {
                if !g.has_edge(e, x) {
                    pairs.insert((e.min(x), e.max(x)));
                }
            }
        }
    };

    let forward = rotation_endpoints(g, path);
    let reversed: Vec<Vertex> = path.iter().rev().copied().collect();
    let backward = rotation_endpoints(g, &reversed);
    add_from(path[0], &forward, &mut pairs);
    add_from(reversed[0], &backward, &mut pairs);

    // Each endpoint reachable from one side can itself be held fixed.
    let mut budget = rotation_budget;
    for &e in forward.iter().filter(|&&e| e != path[path.len() - 1]) {
        if budget == 0 {
            break;
        }
        budget -= 1;
        if let Some(q) = rotated_path_ending_at(g, path, e) {
            let q_rev: Vec<Vertex> = q.into_iter().rev().collect();
            let ends = rotation_endpoints(g, &q_rev);
            add_from(e, &ends, &mut pairs);
        }
    }

    BoosterSet { pairs: pairs.into_iter().collect(), exactness: Exactness::PosaCertified, path_len: path.len() }
}

/// A path obtained from `path` by rotations with `path[0]` fixed that ends in
/// `target`.
fn rotated_path_ending_at(g: &Graph, path: &[Vertex], target: Vertex) -> Option<Vec<Vertex>> {
    let n = g.n();
    let l = path.len();
    let mut on_path = vec![false; n];
    for &v in path {
        on_path[v] = true;
    }
    let mut seen = vec![false; n];
    seen[path[l - 1]] = true;
    let mut queue = std::collections::VecDeque::from([path.to_vec()]);
    let mut pos = vec![0usize; n];
    while let Some(q) = queue.pop_front() {
        if q[l - 1] == target {
            return Some(q);
        }
        for (i, &v) in q.iter().enumerate() {
            pos[v] = i;
        }
        let mut pivots: Vec<usize> = g.neighbors(q[l - 1]).filter(|&w| on_path[w]).map(|w| pos[w]).collect();
        pivots.sort_unstable();
        for i in pivots {
            if i + 2 >= l || seen[q[i + 1]] {
                continue;
            }
            seen[q[i + 1]] = true;
            let mut r = q[..=i].to_vec();
            r.extend(q[i + 1..].iter().rev());
            queue.push_back(r);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_star() {
        let p4 = Graph::path(4);
        assert_eq!(boosters_exact(&p4).unwrap().pairs, vec![(0, 3)]);
        let star = Graph::star(3);
        assert_eq!(boosters_exact(&star).unwrap().pairs, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(boosters_exact(&Graph::cycle(4)), Err(AnalysisError::HamiltonianInput));
        assert!(boosters_posa(&p4, 0, 8).unwrap().contains(0, 3));
    }
}
