//! Sample checks of the typical properties of `G(n, p)` used by the
//! strategies: sparse small sets, dense pairs of big sets, few edges, and
//! bounded maximum and minimum degree.
//!
//! Set-quantified properties are enumerated exactly on graphs with at most
//! 20 vertices and searched by random and greedy sampling above that, so a
//! sampled pass is evidence, while a failure always carries a witness.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::criterion::min_degree_gamma;
use super::{ln_choose, tail_threshold};
use crate::graph::{Graph, Vertex};
use crate::rng::rng_from_seed;

/// Exact enumeration limit on the number of vertices.
pub const EXACT_MAX_N: usize = 20;
const PAIR_BUDGET: f64 = 2e6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChecksParams {
    /// Edge probability the graph is assumed to be drawn with.
    pub p: f64,
    /// Small-set fraction: sets of size at most `t n`.
    pub t: f64,
    /// Big-set size; `None` picks the smallest `k` with
    /// `k p >= 100 ln(n/k)` and `2k <= n`, if there is one.
    pub k: Option<usize>,
    /// Random sets drawn by the sampled checks.
    pub samples: usize,
    pub seed: u64,
}

impl ChecksParams {
    pub fn new(p: f64, seed: u64) -> Self {
        ChecksParams { p, t: 0.1, k: None, samples: 200, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub hypothesis_ok: bool,
    /// `None` when the check was skipped because the hypothesis fails.
    pub pass: Option<bool>,
    /// Offending vertex sets (one set, a pair, or a single vertex).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<Vertex>>>,
    /// Sets examined (1 for whole-graph quantities).
    pub sample_size: u64,
    pub seed: u64,
    /// `exact`, `sampled` or `direct`.
    pub mode: &'static str,
    pub detail: String,
}

fn skipped(name: &'static str, seed: u64, detail: String) -> CheckResult {
    CheckResult { name, hypothesis_ok: false, pass: None, witness: None, sample_size: 0, seed, mode: "direct", detail }
}

/// Runs all five checks on `g`.
pub fn random_graph_checks(g: &Graph, params: &ChecksParams) -> Vec<CheckResult> {
    vec![
        edges_in_small_sets(g, params),
        edges_between_big_sets(g, params),
        edge_count(g, params),
        max_degree(g, params),
        min_degree(g, params),
    ]
}

fn log_constant(n: usize, p: f64) -> f64 {
    p * n as f64 / (n as f64).ln()
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.neighbors(v).fold(0u32, |m, w| m | 1 << w)).collect()
}

fn mask_vertices(mask: u32) -> Vec<Vertex> {
    (0..32).filter(|&v| mask >> v & 1 == 1).collect()
}

/// `e(A) <= 2 c t |A| ln n` for every `1 <= |A| <= t n`, `p = c ln n / n`.
pub fn edges_in_small_sets(g: &Graph, params: &ChecksParams) -> CheckResult {
    const NAME: &str = "edges_in_small_sets";
    let n = g.n();
    let seed = params.seed;
    if n < 2 {
        return skipped(NAME, seed, "need n >= 2".into());
    }
    let ln_n = (n as f64).ln();
    let c = log_constant(n, params.p);
    let max_size = (params.t * n as f64).floor() as usize;
    // `t log n -> ∞` read at desk scale as `t ln n >= 1`.
    if !(c > 0.0 && params.t > 0.0 && params.t * ln_n >= 1.0 && max_size >= 1) {
        return skipped(NAME, seed, format!("needs c > 0, t ln n >= 1 and t n >= 1 (c = {c:.4}, t = {})", params.t));
    }
    let per_vertex = 2.0 * c * params.t * ln_n;
    // Largest excess e(A) - per_vertex |A| seen, with its set.
    let mut worst: (f64, Vec<Vertex>) = (f64::NEG_INFINITY, Vec::new());
    let consider = |edges: usize, set: &[Vertex], worst: &mut (f64, Vec<Vertex>)| {
        let excess = edges as f64 - per_vertex * set.len() as f64;
        if excess > worst.0 {
            *worst = (excess, set.to_vec());
        }
    };
    let (mode, examined) = if n <= EXACT_MAX_N {
        let adj = adjacency_masks(g);
        let mut examined = 0u64;
        for mask in 1u32..(1u32 << n) {
            if mask.count_ones() as usize > max_size {
                continue;
            }
            examined += 1;
            let twice: u32 = mask_vertices(mask).iter().map(|&v| (adj[v] & mask).count_ones()).sum();
            let excess = twice as f64 / 2.0 - per_vertex * mask.count_ones() as f64;
            if excess > worst.0 {
                worst = (excess, mask_vertices(mask));
            }
        }
        ("exact", examined)
    } else {
        let mut rng = rng_from_seed(seed);
        let mut examined = 0u64;
        let mut all: Vec<Vertex> = (0..n).collect();
        for _ in 0..params.samples {
            let size = rng.gen_range(1..=max_size);
            all.shuffle(&mut rng);
            let mut set = all[..size].to_vec();
            set.sort_unstable();
            let e = g.edges_within(&set).expect("valid set").len();
            consider(e, &set, &mut worst);
            examined += 1;
        }
        // Greedy dense sets grown from the highest-degree vertices.
        let mut starts: Vec<Vertex> = (0..n).collect();
        starts.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        for &start in starts.iter().take(4) {
            examined += greedy_dense_prefixes(g, start, max_size, &mut |e, set| consider(e, set, &mut worst));
        }
        ("sampled", examined)
    };
    let pass = worst.0 <= 0.0;
    CheckResult {
        name: NAME,
        hypothesis_ok: true,
        pass: Some(pass),
        witness: (!pass).then(|| vec![worst.1.clone()]),
        sample_size: examined,
        seed,
        mode,
        detail: format!("bound 2ct|A|ln n = {per_vertex:.4}|A|, |A| <= {max_size}, largest excess {:.4}", worst.0),
    }
}

/// Grows a set from `start`, each step adding the vertex with the most
/// neighbours inside, and reports every prefix.
fn greedy_dense_prefixes(g: &Graph, start: Vertex, max_size: usize, report: &mut impl FnMut(usize, &[Vertex])) -> u64 {
    let n = g.n();
    let mut inside = vec![false; n];
    let mut links = vec![0usize; n];
    let mut set = Vec::new();
    let mut edges = 0;
    let mut next = Some(start);
    while let Some(v) = next {
        inside[v] = true;
        edges += links[v];
        set.push(v);
        for w in g.neighbors(v) {
            links[w] += 1;
        }
        report(edges, &set);
        if set.len() >= max_size {
            break;
        }
        next = (0..n).filter(|&w| !inside[w]).max_by_key(|&w| (links[w], std::cmp::Reverse(w)));
    }
    set.len() as u64
}

/// Smallest `k` with `k p >= 100 ln(n/k)` and `2k <= n`.
pub fn auto_big_set_size(n: usize, p: f64) -> Option<usize> {
    (1..=n / 2).find(|&k| k as f64 * p >= 100.0 * (n as f64 / k as f64).ln())
}

/// `e(X, Y) >= k^2 p / 2` for disjoint `X, Y` of size `k`.
pub fn edges_between_big_sets(g: &Graph, params: &ChecksParams) -> CheckResult {
    const NAME: &str = "edges_between_big_sets";
    let n = g.n();
    let seed = params.seed;
    let k = match params.k.or_else(|| auto_big_set_size(n, params.p)) {
        Some(k) => k,
        None => return skipped(NAME, seed, format!("no k <= n/2 with k p >= 100 ln(n/k) (p = {})", params.p)),
    };
    if k == 0 || 2 * k > n || (k as f64 * params.p) < 100.0 * (n as f64 / k as f64).ln() {
        return skipped(NAME, seed, format!("k = {k} violates k p >= 100 ln(n/k) or 2k <= n"));
    }
    let need = k as f64 * k as f64 * params.p / 2.0;
    let mut worst: (usize, Vec<Vertex>, Vec<Vertex>) = (usize::MAX, Vec::new(), Vec::new());
    let pairs = (2.0 * ln_choose(n, k)).exp();
    let (mode, examined) = if n <= EXACT_MAX_N && pairs <= PAIR_BUDGET {
        let adj = adjacency_masks(g);
        let full = (1u32 << n) - 1;
        let mut examined = 0u64;
        for x in 1u32..=full {
            if x.count_ones() as usize != k {
                continue;
            }
            let rest = full & !x;
            // Subsets of `rest` of size k.
            let mut y = rest;
            loop {
                if y.count_ones() as usize == k {
                    examined += 1;
                    let e: u32 = mask_vertices(x).iter().map(|&v| (adj[v] & y).count_ones()).sum();
                    if (e as usize) < worst.0 {
                        worst = (e as usize, mask_vertices(x), mask_vertices(y));
                    }
                }
                if y == 0 {
                    break;
                }
                y = (y - 1) & rest;
            }
        }
        ("exact", examined)
    } else {
        let mut rng = rng_from_seed(seed);
        let mut all: Vec<Vertex> = (0..n).collect();
        let mut links = vec![0usize; n];
        let mut inside = vec![false; n];
        for _ in 0..params.samples {
            all.shuffle(&mut rng);
            let mut x = all[..k].to_vec();
            x.sort_unstable();
            for &v in &x {
                inside[v] = true;
                for w in g.neighbors(v) {
                    links[w] += 1;
                }
            }
            // Against a fixed X the sparsest Y takes the k outside vertices
            // with the fewest neighbours in X.
            let mut outside: Vec<Vertex> = (0..n).filter(|&v| !inside[v]).collect();
            outside.sort_by_key(|&v| (links[v], v));
            let mut y = outside[..k].to_vec();
            let e: usize = y.iter().map(|&v| links[v]).sum();
            y.sort_unstable();
            if e < worst.0 {
                worst = (e, x.clone(), y);
            }
            for &v in &x {
                inside[v] = false;
                for w in g.neighbors(v) {
                    links[w] -= 1;
                }
            }
        }
        ("sampled", params.samples as u64)
    };
    let pass = worst.0 as f64 >= need;
    CheckResult {
        name: NAME,
        hypothesis_ok: true,
        pass: Some(pass),
        witness: (!pass).then(|| vec![worst.1.clone(), worst.2.clone()]),
        sample_size: examined,
        seed,
        mode,
        detail: format!("k = {k}, need e(X,Y) >= {need:.3}, fewest found {}", worst.0),
    }
}

/// `e(G) <= c n` for `p = c / n`.
pub fn edge_count(g: &Graph, params: &ChecksParams) -> CheckResult {
    const NAME: &str = "edge_count";
    let c = params.p * g.n() as f64;
    if !(c > 0.0) {
        return skipped(NAME, params.seed, "needs p > 0".into());
    }
    let bound = c * g.n() as f64;
    let pass = g.edge_count() as f64 <= bound;
    CheckResult {
        name: NAME,
        hypothesis_ok: true,
        pass: Some(pass),
        witness: None,
        sample_size: 1,
        seed: params.seed,
        mode: "direct",
        detail: format!("e(G) = {}, bound c n = {bound:.3}", g.edge_count()),
    }
}

fn extreme_vertex(g: &Graph, max: bool) -> Vertex {
    let key = |v: &Vertex| if max { g.degree(*v) } else { usize::MAX - g.degree(*v) };
    (0..g.n()).rev().max_by_key(key).unwrap_or(0)
}

/// `Δ(G) <= 9 c ln n` for `p = c ln n / n`, `c > 2 / (9 ln 3)`.
pub fn max_degree(g: &Graph, params: &ChecksParams) -> CheckResult {
    const NAME: &str = "max_degree";
    let n = g.n();
    if n < 2 {
        return skipped(NAME, params.seed, "need n >= 2".into());
    }
    let c = log_constant(n, params.p);
    if !(c > tail_threshold()) {
        return skipped(NAME, params.seed, format!("needs c > 2/(9 ln 3), got c = {c:.4}"));
    }
    let bound = 9.0 * c * (n as f64).ln();
    let v = extreme_vertex(g, true);
    let pass = g.degree(v) as f64 <= bound;
    CheckResult {
        name: NAME,
        hypothesis_ok: true,
        pass: Some(pass),
        witness: (!pass).then(|| vec![vec![v]]),
        sample_size: 1,
        seed: params.seed,
        mode: "direct",
        detail: format!("Δ = {}, bound 9c ln n = {bound:.3}", g.degree(v)),
    }
}

/// `δ(G) >= γ ln n` for `p = (1 + ε) ln n / n`, with `γ(ε)` as constructed.
pub fn min_degree(g: &Graph, params: &ChecksParams) -> CheckResult {
    const NAME: &str = "min_degree";
    let n = g.n();
    if n < 2 {
        return skipped(NAME, params.seed, "need n >= 2".into());
    }
    let eps = log_constant(n, params.p) - 1.0;
    if !(eps > 0.0) {
        return skipped(NAME, params.seed, format!("needs p > ln n / n, got ε = {eps:.4}"));
    }
    let gamma = min_degree_gamma(eps);
    let bound = gamma * (n as f64).ln();
    let v = extreme_vertex(g, false);
    let pass = g.degree(v) as f64 >= bound;
    CheckResult {
        name: NAME,
        hypothesis_ok: true,
        pass: Some(pass),
        witness: (!pass).then(|| vec![vec![v]]),
        sample_size: 1,
        seed: params.seed,
        mode: "direct",
        detail: format!("δ = {}, γ = {gamma:.5}, bound γ ln n = {bound:.3}", g.degree(v)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_is_not_sparse() {
        let params = ChecksParams { t: 0.5, ..ChecksParams::new(0.05, 3) };
        let r = edges_in_small_sets(&Graph::complete(20), &params);
        assert_eq!((r.mode, r.pass), ("exact", Some(false)));
        let w = &r.witness.unwrap()[0];
        let g = Graph::complete(20);
        let c = log_constant(20, 0.05);
        assert!(g.edges_within(w).unwrap().len() as f64 > 2.0 * c * 0.5 * w.len() as f64 * 20f64.ln());
    }

    #[test]
    fn sampled_small_sets_find_a_planted_clique() {
        let mut g = Graph::new(200);
        for u in 0..12 {
            for v in u + 1..12 {
                g.add_edge(u, v).unwrap();
            }
        }
        let r = edges_in_small_sets(&g, &ChecksParams { t: 0.2, ..ChecksParams::new(0.01, 1) });
        assert_eq!((r.mode, r.pass), ("sampled", Some(false)));
    }

    #[test]
    fn big_sets_exact_and_witnessed() {
        let params = ChecksParams { k: Some(5), ..ChecksParams::new(1.0, 2) };
        assert_eq!(edges_between_big_sets(&Graph::complete(12), &params).pass, None);
        let params = ChecksParams { k: Some(6), p: 400.0, ..params };
        let r = edges_between_big_sets(&Graph::complete(12), &params);
        assert_eq!((r.mode, r.pass), ("exact", Some(false)));
    }

    #[test]
    fn degree_checks_on_a_cycle() {
        let g = Graph::cycle(100);
        let p = 2.0 * 100f64.ln() / 100.0;
        let r = random_graph_checks(&g, &ChecksParams::new(p, 0));
        let by = |name: &str| r.iter().find(|c| c.name == name).unwrap().pass;
        assert_eq!(by("max_degree"), Some(true));
        assert_eq!(by("min_degree"), Some(true));
        assert_eq!(by("edge_count"), Some(true));
        assert_eq!(by("edges_between_big_sets"), None);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"hypothesis_ok\":false"));
    }
}
