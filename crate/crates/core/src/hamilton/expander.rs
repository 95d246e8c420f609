//! `(t, k)`-expansion: `|N(U)| >= k |U|` for every vertex set with
//! `|U| <= t`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::graph::{Graph, Vertex};
use crate::rng::{rng_from_seed, GameRng};

/// Default cap on the number of subsets enumerated in exact mode.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// Candidates scored per growth step of the sampled search.
const MAX_CANDIDATES: usize = 96;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpanderMode {
    Exact,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpanderReport {
    pub t: usize,
    pub k: usize,
    /// `true` when no violating set was found. In sampled mode this means "no
    /// violation found", not a proof.
    pub verdict: bool,
    pub witness: Option<Vec<Vertex>>,
    pub witness_neighborhood: Option<usize>,
    pub mode: &'static str,
    pub trials: usize,
}

/// `sum_{s=1..t} C(n, s)`, saturating.
pub fn subsets_up_to(n: usize, t: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for s in 1..=t.min(n) {
        c = c.saturating_mul((n - s + 1) as u128) / s as u128;
        total = total.saturating_add(c);
        if c == u128::MAX {
            return u128::MAX;
        }
    }
    total
}

pub fn is_expander(g: &Graph, t: usize, k: usize, mode: ExpanderMode) -> Result<ExpanderReport, AnalysisError> {
    is_expander_with_budget(g, t, k, mode, ENUMERATION_BUDGET)
}

pub fn is_expander_with_budget(
    g: &Graph,
    t: usize,
    k: usize,
    mode: ExpanderMode,
    budget: u128,
) -> Result<ExpanderReport, AnalysisError> {
    let (witness, mode_name, trials) = match mode {
        ExpanderMode::Exact => {
            let needed = subsets_up_to(g.n(), t);
            if needed > budget {
                return Err(AnalysisError::BudgetExceeded { needed, budget });
            }
            (exact_violation(g, t, k), "exact", 0)
        }
        ExpanderMode::Sampled { trials, seed } => {
            let mut rng = rng_from_seed(seed);
            (find_violation(g, t, k, trials, &mut rng), "sampled", trials)
        }
    };
    let witness_neighborhood = witness.as_ref().map(|w| g.neighborhood(w).map(|nb| nb.len())).transpose()?;
    Ok(ExpanderReport { t, k, verdict: witness.is_none(), witness, witness_neighborhood, mode: mode_name, trials })
}

/// Incrementally maintained `U`, `N(U)` counts.
struct Grow<'a> {
    g: &'a Graph,
    in_set: Vec<bool>,
    /// Number of neighbours each vertex has inside `U`.
    hits: Vec<usize>,
    members: Vec<Vertex>,
    nb_size: usize,
}

impl<'a> Grow<'a> {
    fn new(g: &'a Graph) -> Self {
        Grow { g, in_set: vec![false; g.n()], hits: vec![0; g.n()], members: Vec::new(), nb_size: 0 }
    }

    fn add(&mut self, u: Vertex) {
        if self.hits[u] > 0 {
            self.nb_size -= 1;
        }
        self.in_set[u] = true;
        self.members.push(u);
        for w in self.g.neighbors(u) {
            if !self.in_set[w] && self.hits[w] == 0 {
                self.nb_size += 1;
            }
            self.hits[w] += 1;
        }
    }

    fn remove_last(&mut self) {
        let u = self.members.pop().expect("non-empty");
        for w in self.g.neighbors(u) {
            self.hits[w] -= 1;
            if !self.in_set[w] && self.hits[w] == 0 {
                self.nb_size -= 1;
            }
        }
        self.in_set[u] = false;
        if self.hits[u] > 0 {
            self.nb_size += 1;
        }
    }

    /// `|N(U + x)| - |N(U)|` for `x` outside `U`.
    fn delta(&self, x: Vertex) -> isize {
        let mut d = if self.hits[x] > 0 { -1 } else { 0 };
        for w in self.g.neighbors(x) {
            if !self.in_set[w] && self.hits[w] == 0 {
                d += 1;
            }
        }
        d
    }

    fn violates(&self, k: usize) -> bool {
        !self.members.is_empty() && self.nb_size < k * self.members.len()
    }
}

fn exact_violation(g: &Graph, t: usize, k: usize) -> Option<Vec<Vertex>> {
    fn rec(s: &mut Grow<'_>, from: Vertex, t: usize, k: usize) -> bool {
        if s.violates(k) {
            return true;
        }
        if s.members.len() == t {
            return false;
        }
        for u in from..s.g.n() {
            s.add(u);
            if rec(s, u + 1, t, k) {
                return true;
            }
            s.remove_last();
        }
        false
    }
    let mut s = Grow::new(g);
    if rec(&mut s, 0, t.min(g.n()), k) {
        let mut w = s.members;
        w.sort_unstable();
        Some(w)
    } else {
        None
    }
}

/// Heuristic search for a set `U`, `|U| <= t`, with `|N(U)| < k|U|`.
///
/// Checks low-degree singletons and small components first, then grows sets
/// greedily from `trials` seed vertices (lowest degree first, then random),
/// each step adding the vertex near `U` that enlarges `N(U)` least. Any set
/// returned is a genuine violation.
pub fn find_violation(g: &Graph, t: usize, k: usize, trials: usize, rng: &mut GameRng) -> Option<Vec<Vertex>> {
    let n = g.n();
    if t == 0 || n == 0 {
        return None;
    }
    if let Some(v) = (0..n).filter(|&v| g.degree(v) < k).min_by_key(|&v| (g.degree(v), v)) {
        return Some(vec![v]);
    }
    if let Some(c) = g.connected_components().into_iter().filter(|c| c.len() <= t).min_by_key(Vec::len) {
        if c.len() < n {
            return Some(c);
        }
    }
    if t == 1 {
        return None;
    }
    let mut by_degree: Vec<Vertex> = (0..n).collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    let mut s = Grow::new(g);
    for trial in 0..trials {
        let seed_vertex = if trial < n / 4 { by_degree[trial] } else { rng.gen_range(0..n) };
        if let Some(w) = grow_from(&mut s, seed_vertex, t, Some(k), rng) {
            return Some(w);
        }
    }
    None
}

/// Grows a set of (at most) `size` vertices from `start`, each step adding the
/// nearby vertex that enlarges the outer neighbourhood least.
pub fn greedy_low_expansion_set(g: &Graph, start: Vertex, size: usize, rng: &mut GameRng) -> Vec<Vertex> {
    let mut s = Grow::new(g);
    grow_from(&mut s, start, size, None, rng).unwrap_or_default()
}

/// Grows from `start`. With `Some(k)` stops at the first set violating
/// `k`-expansion (returning it, or `None`); with `None` returns the grown set.
fn grow_from(s: &mut Grow<'_>, start: Vertex, t: usize, k: Option<usize>, rng: &mut GameRng) -> Option<Vec<Vertex>> {
    let g = s.g;
    s.add(start);
    let mut found = None;
    let mut mark = vec![false; g.n()];
    while s.members.len() < t {
        // Candidates: N(U) and the vertices adjacent to N(U).
        let mut cand = Vec::new();
        for &u in &s.members {
            for y in g.neighbors(u) {
                if !s.in_set[y] && !mark[y] {
                    mark[y] = true;
                    cand.push(y);
                }
            }
        }
        let first_shell = cand.len();
        for i in 0..first_shell {
            for z in g.neighbors(cand[i]) {
                if !s.in_set[z] && !mark[z] {
                    mark[z] = true;
                    cand.push(z);
                }
            }
        }
        for &c in &cand {
            mark[c] = false;
        }
        if cand.is_empty() {
            break;
        }
        if cand.len() > MAX_CANDIDATES {
            cand.partial_shuffle(rng, MAX_CANDIDATES);
            cand.truncate(MAX_CANDIDATES);
        }
        let best = cand.iter().copied().min_by_key(|&x| (s.delta(x), x)).expect("non-empty");
        s.add(best);
        if k.is_some_and(|k| s.violates(k)) {
            let mut w = s.members.clone();
            w.sort_unstable();
            found = Some(w);
            break;
        }
    }
    if k.is_none() {
        let mut w = s.members.clone();
        w.sort_unstable();
        found = Some(w);
    }
    while !s.members.is_empty() {
        s.remove_last();
    }
    found
}
