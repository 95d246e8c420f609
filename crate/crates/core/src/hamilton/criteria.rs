//! The expansion/connectivity criterion for Hamiltonicity: P1 asks small sets
//! to expand by a factor `d`, P2 asks for an edge between any two disjoint
//! sets of a given size.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::expander::{greedy_low_expansion_set, is_expander_with_budget, subsets_up_to, ExpanderMode, ExpanderReport};
use crate::error::AnalysisError;
use crate::graph::{Graph, Vertex};
use crate::rng::rng_from_seed;

/// Smallest `d` the criterion allows.
pub const MIN_D: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct CriteriaReport {
    pub n: usize,
    pub d_requested: usize,
    pub d_used: usize,
    pub d_clamped: bool,
    /// Whether `d <= e^{(log n)^{1/3}}` holds for the `d` used.
    pub d_upper_ok: bool,
    pub p1_max_set: usize,
    pub p2_set_size: usize,
    pub p1: bool,
    pub p2: bool,
    pub p1_report: ExpanderReport,
    pub p2_witness: Option<(Vec<Vertex>, Vec<Vertex>)>,
    pub p2_mode: &'static str,
}

/// `n log log n log d / (log n log log log n)`, the common factor of both set
/// sizes.
fn scale(n: usize, d: usize) -> Result<f64, AnalysisError> {
    if n < 16 {
        return Err(AnalysisError::TooSmall(n));
    }
    let nf = n as f64;
    let l = nf.ln();
    Ok(nf * l.ln() * (d as f64).ln() / (l * l.ln().ln()))
}

/// Largest set size P1 quantifies over.
pub fn p1_max_set(n: usize, d: usize) -> Result<usize, AnalysisError> {
    Ok((scale(n, d)? / d as f64).floor() as usize)
}

/// Set size in P2 (sets at least this large must be joined by an edge).
pub fn p2_set_size(n: usize, d: usize) -> Result<usize, AnalysisError> {
    Ok(((scale(n, d)? / 4130.0).ceil() as usize).max(1))
}

/// Checks P1 and P2 with `d` raised to 12 if smaller. Both checks are exact
/// when the number of subsets fits `budget`, sampled otherwise (a failure
/// always carries a witness).
pub fn check_p1_p2(
    g: &Graph,
    d: usize,
    seed: u64,
    trials: usize,
    budget: u128,
) -> Result<CriteriaReport, AnalysisError> {
    let n = g.n();
    let d_used = d.max(MIN_D);
    let s1 = p1_max_set(n, d_used)?;
    let s2 = p2_set_size(n, d_used)?;
    let d_upper_ok = (d_used as f64).ln() <= (n as f64).ln().cbrt();

    let p1_mode = if subsets_up_to(n, s1) <= budget {
        ExpanderMode::Exact
    } else {
        ExpanderMode::Sampled { trials, seed }
    };
    let p1_report = is_expander_with_budget(g, s1, d_used, p1_mode, budget)?;

    let (p2_witness, p2_mode) = if 2 * s2 > n {
        (None, "vacuous")
    } else if subsets_up_to(n, s2) <= budget {
        (p2_exact(g, s2), "exact")
    } else {
        (p2_sampled(g, s2, seed, trials), "sampled")
    };

    Ok(CriteriaReport {
        n,
        d_requested: d,
        d_used,
        d_clamped: d_used != d,
        d_upper_ok,
        p1_max_set: s1,
        p2_set_size: s2,
        p1: p1_report.verdict,
        p2: p2_witness.is_none(),
        p1_report,
        p2_witness,
        p2_mode,
    })
}

/// Vertices outside `A ∪ N(A)`.
fn far_side(g: &Graph, a: &[Vertex]) -> Vec<Vertex> {
    let mut blocked = vec![false; g.n()];
    for &u in a {
        blocked[u] = true;
        for w in g.neighbors(u) {
            blocked[w] = true;
        }
    }
    (0..g.n()).filter(|&v| !blocked[v]).collect()
}

/// P2 fails iff some `s`-set `A` leaves at least `s` vertices outside
/// `A ∪ N(A)`.
fn p2_exact(g: &Graph, s: usize) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
    fn rec(g: &Graph, s: usize, from: usize, a: &mut Vec<Vertex>) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
        if a.len() == s {
            let far = far_side(g, a);
            return (far.len() >= s).then(|| (a.clone(), far[..s].to_vec()));
        }
        for u in from..g.n() {
            a.push(u);
            if let Some(w) = rec(g, s, u + 1, a) {
                return Some(w);
            }
            a.pop();
        }
        None
    }
    rec(g, s, 0, &mut Vec::new())
}

fn p2_sampled(g: &Graph, s: usize, seed: u64, trials: usize) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
    let n = g.n();
    let mut rng = rng_from_seed(seed);
    let mut by_degree: Vec<Vertex> = (0..n).collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    for trial in 0..trials.max(1) {
        // Alternate greedy low-expansion sets (the likeliest A) with uniform
        // random sets.
        let a = if trial % 2 == 0 {
            let start = if trial / 2 < n { by_degree[trial / 2] } else { rng.gen_range(0..n) };
            greedy_low_expansion_set(g, start, s, &mut rng)
        } else {
            let mut all: Vec<Vertex> = (0..n).collect();
            all.shuffle(&mut rng);
            all.truncate(s);
            all.sort_unstable();
            all
        };
        if a.len() < s {
            continue;
        }
        let far = far_side(g, &a);
        if far.len() >= s {
            return Some((a, far[..s].to_vec()));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_n_is_rejected() {
        assert_eq!(p1_max_set(15, 12), Err(AnalysisError::TooSmall(15)));
    }

    #[test]
    fn empty_graph_fails_both() {
        let r = check_p1_p2(&Graph::new(40), 12, 1, 5, 1_000_000).unwrap();
        assert!(!r.p1);
        assert!(!r.p2);
        assert!(r.d_clamped || r.d_requested == 12);
    }
}
