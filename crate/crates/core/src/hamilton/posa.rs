//! Pósa rotation-extension.
//!
//! A path `P = v_0 .. v_l` whose endpoint `v_l` is adjacent to some `v_i`
//! (`i < l - 1`) can be rotated into `v_0 .. v_i v_l v_{l-1} .. v_{i+1}`,
//! which has the same vertex set and the new endpoint `v_{i+1}`. Rotations are
//! explored breadth-first; whenever some reachable endpoint has a neighbour
//! off the path, or closes a cycle that can be broken open towards an
//! outside vertex, the path grows.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::exact::{is_hamilton_cycle, is_simple_path};
use crate::graph::{Graph, Vertex};
use crate::rng::{rng_from_seed, GameRng};

pub const DEFAULT_RESTARTS: usize = 5;

/// Outcome of rotation-extension when no Hamilton cycle was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosaState {
    pub path: Vec<Vertex>,
    /// Endpoints reachable by rotations that keep `path[0]` fixed, including
    /// the path's own last vertex.
    pub endpoints: Vec<Vertex>,
    /// Non-adjacent pairs `(path[0], e)` over those endpoints.
    pub closing_pairs: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosaResult {
    pub cycle: Option<Vec<Vertex>>,
    pub state: PosaState,
}

enum Step {
    Extended,
    Closed(Vec<Vertex>),
    Stuck,
}

/// Rotation-extension with [`DEFAULT_RESTARTS`] restarts.
pub fn posa_extend(g: &Graph, seed: u64) -> PosaResult {
    posa_extend_with(g, seed, DEFAULT_RESTARTS)
}

/// Runs rotation-extension from `restarts` random start vertices (at least
/// one) and returns the first Hamilton cycle found, or the longest path seen.
pub fn posa_extend_with(g: &Graph, seed: u64, restarts: usize) -> PosaResult {
    let mut rng = rng_from_seed(seed);
    let n = g.n();
    let mut best: Vec<Vertex> = Vec::new();
    if n == 0 {
        return PosaResult { cycle: None, state: closure_state(g, Vec::new()) };
    }
    for _ in 0..restarts.max(1) {
        let start = rng.gen_range(0..n);
        let (cycle, path) = grow_path(g, vec![start], &mut rng);
        if let Some(c) = cycle {
            let state = closure_state(g, c.clone());
            return PosaResult { cycle: Some(c), state };
        }
        if path.len() > best.len() {
            best = path;
        }
    }
    PosaResult { cycle: None, state: closure_state(g, best) }
}

/// `true` if rotation-extension finds a (validated) Hamilton cycle.
pub fn posa_hamiltonian(g: &Graph, seed: u64, restarts: usize) -> bool {
    if g.n() < 3 || g.min_degree() < 2 || !g.is_connected() {
        return false;
    }
    posa_extend_with(g, seed, restarts).cycle.is_some()
}

/// Grows a simple path until a Hamilton cycle closes or no rotation helps.
/// Returns the cycle (if any) and the final path.
pub fn grow_path(g: &Graph, mut path: Vec<Vertex>, rng: &mut GameRng) -> (Option<Vec<Vertex>>, Vec<Vertex>) {
    debug_assert!(is_simple_path(g, &path));
    let mut on_path = vec![false; g.n()];
    for &v in &path {
        on_path[v] = true;
    }
    loop {
        match improve(g, &mut path, &mut on_path, rng) {
            Step::Extended => continue,
            Step::Closed(c) => {
                assert!(is_hamilton_cycle(g, &c), "rotation-extension produced an invalid cycle");
                return (Some(c), path);
            }
            Step::Stuck => {
                assert!(is_simple_path(g, &path), "rotation-extension produced a non-simple path");
                return (None, path);
            }
        }
    }
}

fn improve(g: &Graph, path: &mut Vec<Vertex>, on_path: &mut [bool], rng: &mut GameRng) -> Step {
    let n = g.n();
    if path.len() == n && n >= 3 && g.has_edge(path[0], path[n - 1]) {
        return Step::Closed(path.clone());
    }
    for _ in 0..2 {
        let end = *path.last().expect("non-empty path");
        let off: Vec<Vertex> = g.neighbors(end).filter(|&w| !on_path[w]).collect();
        if let Some(&w) = off.choose(rng) {
            path.push(w);
            on_path[w] = true;
            return Step::Extended;
        }
        path.reverse();
    }
    for _ in 0..2 {
        match rotate_search(g, path, on_path, true) {
            Search::Found(Found::Extend(p, w)) => {
                *path = p;
                path.push(w);
                on_path[w] = true;
                return Step::Extended;
            }
            Search::Found(Found::Cycle(c)) => {
                if c.len() == n {
                    return Step::Closed(c);
                }
                if let Some(p) = break_cycle_outwards(g, &c, on_path) {
                    on_path[*p.first().expect("non-empty")] = true;
                    *path = p;
                    return Step::Extended;
                }
            }
            Search::Exhausted(_) => {}
        }
        path.reverse();
    }
    Step::Stuck
}

enum Found {
    /// A rotated path whose endpoint has the off-path neighbour `.1`.
    Extend(Vec<Vertex>, Vertex),
    /// A rotated path whose endpoints are adjacent.
    Cycle(Vec<Vertex>),
}

enum Search {
    Found(Found),
    Exhausted(Vec<Vertex>),
}

/// Breadth-first search over rotations with `path[0]` fixed. With
/// `stop_early` the first useful rotation is returned; otherwise all
/// reachable endpoints are collected.
fn rotate_search(g: &Graph, path: &[Vertex], on_path: &[bool], stop_early: bool) -> Search {
    let n = g.n();
    let l = path.len();
    let a = path[0];
    let mut seen = vec![false; n];
    let mut endpoints = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let mut pos = vec![usize::MAX; n];

    let useful = |q: &[Vertex]| -> Option<Found> {
        let e = *q.last().expect("non-empty");
        if let Some(w) = g.neighbors(e).filter(|&w| !on_path[w]).min() {
            return Some(Found::Extend(q.to_vec(), w));
        }
        if l >= 3 && g.has_edge(a, e) && (l == n || q.iter().any(|&x| g.neighbors(x).any(|y| !on_path[y]))) {
            return Some(Found::Cycle(q.to_vec()));
        }
        None
    };

    seen[path[l - 1]] = true;
    endpoints.push(path[l - 1]);
    if stop_early {
        if let Some(f) = useful(path) {
            return Search::Found(f);
        }
    }
    queue.push_back(path.to_vec());
    while let Some(q) = queue.pop_front() {
        for (i, &v) in q.iter().enumerate() {
            pos[v] = i;
        }
        let v = q[l - 1];
        let mut pivots: Vec<usize> = g.neighbors(v).filter(|&w| on_path[w]).map(|w| pos[w]).collect();
        pivots.sort_unstable();
        for i in pivots {
            if i + 2 >= l {
                continue;
            }
            let new_end = q[i + 1];
            if seen[new_end] {
                continue;
            }
            seen[new_end] = true;
            endpoints.push(new_end);
            let mut r = q[..=i].to_vec();
            r.extend(q[i + 1..].iter().rev());
            if stop_early {
                if let Some(f) = useful(&r) {
                    return Search::Found(f);
                }
            }
            queue.push_back(r);
        }
    }
    Search::Exhausted(endpoints)
}

/// Opens the cycle `c` (consecutive vertices adjacent, ends adjacent) at a
/// vertex with a neighbour `y` off the cycle, giving a path one longer that
/// starts at `y`.
fn break_cycle_outwards(g: &Graph, c: &[Vertex], on_path: &[bool]) -> Option<Vec<Vertex>> {
    let (i, y) = c.iter().enumerate().find_map(|(i, &x)| g.neighbors(x).filter(|&y| !on_path[y]).min().map(|y| (i, y)))?;
    let l = c.len();
    let mut p = Vec::with_capacity(l + 1);
    p.push(y);
    for k in 0..l {
        p.push(c[(i + l - k) % l]);
    }
    Some(p)
}

/// Endpoints reachable by rotations from `path` with `path[0]` fixed.
pub fn rotation_endpoints(g: &Graph, path: &[Vertex]) -> Vec<Vertex> {
    if path.is_empty() {
        return Vec::new();
    }
    let mut on_path = vec![false; g.n()];
    for &v in path {
        on_path[v] = true;
    }
    match rotate_search(g, path, &on_path, false) {
        Search::Exhausted(mut e) => {
            e.sort_unstable();
            e
        }
        Search::Found(_) => unreachable!("exhaustive search never stops early"),
    }
}

fn closure_state(g: &Graph, path: Vec<Vertex>) -> PosaState {
    let endpoints = rotation_endpoints(g, &path);
    let closing_pairs = match path.first() {
        Some(&a) => endpoints.iter().filter(|&&e| e != a && !g.has_edge(a, e)).map(|&e| (a.min(e), a.max(e))).collect(),
        None => Vec::new(),
    };
    PosaState { path, endpoints, closing_pairs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cycles_in_easy_graphs() {
        for n in 3..30 {
            assert!(posa_extend(&Graph::cycle(n), n as u64).cycle.is_some(), "C_{n}");
            assert!(posa_extend(&Graph::complete(n), 1).cycle.is_some(), "K_{n}");
        }
    }

    #[test]
    fn path_graph_is_stuck_with_both_ends() {
        let g = Graph::path(5);
        let r = posa_extend(&g, 3);
        assert!(r.cycle.is_none());
        assert_eq!(r.state.path.len(), 5);
        assert!(r.state.closing_pairs.contains(&(0, 4)));
    }

    #[test]
    fn rotation_endpoints_of_lollipop() {
        // Path 0-1-2-3 with the chord 3-1: rotating at 1 gives endpoint 2.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(rotation_endpoints(&g, &[0, 1, 2, 3]), vec![2, 3]);
    }
}
