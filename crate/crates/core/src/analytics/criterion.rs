//! The two transversal-game sums behind Client's side of the Client-Waiter
//! game: the star family `F1` (all-but-`r log n` edges at a vertex) and the
//! bipartite family `F2` (edges between two large disjoint sets).

use serde::Serialize;

use super::{compensated_sum, ln_choose, ln_choose_real};
use crate::error::AnalysisError;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriterionConfig {
    pub q: usize,
    /// Exponent constant of `F1`: sets have `d(v) - r log n` edges.
    pub r: f64,
    /// Set-size constant of `F2`: sets of `λ n log log n / log n` vertices.
    pub lambda: f64,
    /// `p = (q + 1 + ε) log n / n`.
    pub eps: f64,
}

/// `0.99` times the supremum of `x in (0, cap)` with
/// `x (a + ln(1/x)) < target`; the left side increases on `(0, e^{a-1})`.
fn largest_below(a: f64, target: f64, cap: f64) -> f64 {
    let g = |x: f64| x * (a - x.ln());
    let mut hi = cap.min((a - 1.0).exp());
    if g(hi) < target {
        return 0.99 * hi;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.99 * lo
}

/// Minimum-degree constant: `γ ln(e(1+ε)/γ) < ε/3` with `γ < 1`.
pub fn min_degree_gamma(eps: f64) -> f64 {
    largest_below(1.0 + (1.0 + eps).ln(), eps / 3.0, 1.0)
}

/// `r < γ` with `r(1 + ln(9(q+1+ε)) + ln(1/r) + ln((q+1)/q)) < ε/(4(q+1))`.
pub fn construct_r(q: usize, eps: f64) -> f64 {
    let qf = q as f64;
    let a = 1.0 + (9.0 * (qf + 1.0 + eps)).ln() + ((qf + 1.0) / qf).ln();
    largest_below(a, eps / (4.0 * (qf + 1.0)), min_degree_gamma(eps))
}

/// Smallest admissible `λ`: at least 100 and `λ ln((q+1)/q) > 2`.
pub fn construct_lambda(q: usize) -> f64 {
    let need = 2.0 / ((q + 1) as f64 / q as f64).ln();
    if need < 100.0 {
        100.0
    } else {
        need * 1.01
    }
}

impl CriterionConfig {
    /// Constants as chosen in the existence arguments for `r` and `λ`.
    pub fn constructed(q: usize, eps: f64) -> Self {
        CriterionConfig { q, r: construct_r(q, eps), lambda: construct_lambda(q), eps }
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.q == 0 || !(self.r > 0.0) || !(self.lambda > 0.0) || !(self.eps > 0.0) {
            return Err(AnalysisError::InvalidParameter("need q >= 1 and r, λ, ε > 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct F1Sum {
    /// `r ln n`, real.
    pub removed: f64,
    /// `⌊r ln n⌋`, the subset size counted.
    pub removed_floor: usize,
    pub sum: f64,
    /// Exponent `r(1 + ln(9(q+1+ε)) + ln(1/r) + ln((q+1)/q)) - ε/(4(q+1))`
    /// of the bound `n^{...}`.
    pub bound_exponent: f64,
    pub bound: f64,
}

/// `Σ_v C(d(v), r ln n) (q/(q+1))^{d(v) - r ln n}` over the degrees of `g`.
pub fn f1_sum(g: &Graph, cfg: &CriterionConfig) -> Result<F1Sum, AnalysisError> {
    cfg.validate()?;
    let n = g.n();
    if n < 2 {
        return Err(AnalysisError::InvalidParameter("need n >= 2".into()));
    }
    let ln_n = (n as f64).ln();
    let qf = cfg.q as f64;
    let removed = cfg.r * ln_n;
    let s = removed.floor() as usize;
    let ln_ratio = (qf / (qf + 1.0)).ln();
    let sum = if removed > g.max_degree() as f64 {
        0.0
    } else {
        compensated_sum(
            (0..n)
                .map(|v| g.degree(v))
                .filter(|&d| d >= s)
                .map(|d| (ln_choose(d, s) + (d as f64 - removed) * ln_ratio).exp()),
        )
    };
    let bound_exponent = cfg.r * (1.0 + (9.0 * (qf + 1.0 + cfg.eps)).ln() - cfg.r.ln() + ((qf + 1.0) / qf).ln())
        - cfg.eps / (4.0 * (qf + 1.0));
    Ok(F1Sum { removed, removed_floor: s, sum, bound_exponent, bound: (bound_exponent * ln_n).exp() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct F2Bound {
    /// `λ n ln ln n / ln n`, real.
    pub set_size: f64,
    pub set_size_floor: usize,
    /// Two disjoint sets of this size do not fit in `n` vertices, so the
    /// family is empty and the chain bounds an empty sum.
    pub vacuous: bool,
    /// `λ >= 100` and `λ ln((q+1)/q) > 2`.
    pub lambda_ok: bool,
    /// Logarithms of the three successive upper bounds in the chain.
    pub ln_binomial_form: f64,
    pub ln_bracket_form: f64,
    pub ln_exponential_form: f64,
    /// `exp(ln_exponential_form)`, the final bound.
    pub bound: f64,
}

/// The closed-form bound chain for `Σ_{A in F2} (q/(q+1))^{|A|}`.
pub fn f2_bound(n: usize, cfg: &CriterionConfig) -> Result<F2Bound, AnalysisError> {
    cfg.validate()?;
    if n < 16 {
        return Err(AnalysisError::TooSmall(n));
    }
    let nf = n as f64;
    let l = nf.ln();
    let ll = l.ln();
    let qf = cfg.q as f64;
    let ln_up = ((qf + 1.0) / qf).ln();
    let set_size = cfg.lambda * nf * ll / l;
    let set_size_floor = set_size.floor() as usize;
    let min_edges = cfg.lambda * cfg.lambda * nf * ll * ll / l;
    let ln_binomial_form = 2.0 * ln_choose_real(nf, set_size_floor as f64) - min_edges * ln_up;
    let ln_bracket_form = set_size * (2.0 * (std::f64::consts::E * l / (cfg.lambda * ll)).ln() - cfg.lambda * ll * ln_up);
    let ln_exponential_form = set_size * (2.0 * ll - cfg.lambda * ll * ln_up);
    Ok(F2Bound {
        set_size,
        set_size_floor,
        vacuous: 2 * set_size_floor > n,
        lambda_ok: cfg.lambda >= 100.0 && cfg.lambda * ln_up > 2.0,
        ln_binomial_form,
        ln_bracket_form,
        ln_exponential_form,
        bound: ln_exponential_form.exp(),
    })
}

/// Both quantities for one graph.
pub fn f1_f2_sums(g: &Graph, cfg: &CriterionConfig) -> Result<(F1Sum, F2Bound), AnalysisError> {
    Ok((f1_sum(g, cfg)?, f2_bound(g.n(), cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_constants_satisfy_their_inequalities() {
        for q in 1..5 {
            for eps in [0.1, 0.5, 1.0, 3.0] {
                let gamma = min_degree_gamma(eps);
                assert!(gamma > 0.0 && gamma < 1.0);
                assert!(gamma * (std::f64::consts::E * (1.0 + eps) / gamma).ln() < eps / 3.0);
                let cfg = CriterionConfig::constructed(q, eps);
                let qf = q as f64;
                let lhs = cfg.r * (1.0 + (9.0 * (qf + 1.0 + eps)).ln() - cfg.r.ln() + ((qf + 1.0) / qf).ln());
                assert!(cfg.r > 0.0 && cfg.r < gamma && lhs < eps / (4.0 * (qf + 1.0)));
                assert!(f2_bound(1000, &cfg).unwrap().lambda_ok);
            }
        }
        assert!(construct_lambda(300) * (301f64 / 300.0).ln() > 2.0);
    }

    #[test]
    fn f1_on_a_regular_graph() {
        let g = Graph::cycle(40);
        let cfg = CriterionConfig { q: 1, r: 0.3, lambda: 100.0, eps: 1.0 };
        let r = f1_sum(&g, &cfg).unwrap();
        let s = (0.3 * 40f64.ln()).floor() as usize;
        assert_eq!(r.removed_floor, s);
        let expected = 40.0 * [1.0, 2.0, 1.0][s] * 0.5f64.powf(2.0 - r.removed);
        assert!((r.sum - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn f1_vanishes_past_the_maximum_degree() {
        let cfg = CriterionConfig { q: 2, r: 1.0, lambda: 100.0, eps: 1.0 };
        assert_eq!(f1_sum(&Graph::cycle(30), &cfg).unwrap().sum, 0.0);
    }

    #[test]
    fn f2_is_vacuous_at_small_n() {
        let b = f2_bound(2000, &CriterionConfig::constructed(1, 1.0)).unwrap();
        assert!(b.vacuous);
        assert!(b.ln_exponential_form < 0.0);
        assert!(f2_bound(10, &CriterionConfig::constructed(1, 1.0)).is_err());
    }
}
