//! Degree-distribution formulas for `G(n, p)`, criterion sums for
//! transversal games, and Monte Carlo estimators to compare them against.

pub mod checks;
pub mod criterion;

use serde::Serialize;
use statrs::function::factorial::ln_binomial;
use statrs::function::gamma::ln_gamma;

use crate::graph::{sample_gnp, Graph, RandomGraphSpec};
use crate::rng::derive_seed;

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_choose(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_binomial(n as u64, k as u64)
}

/// `ln C(n, x)` for real `x` through the log-gamma function.
pub fn ln_choose_real(n: f64, x: f64) -> f64 {
    if x < 0.0 || x > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n + 1.0) - ln_gamma(x + 1.0) - ln_gamma(n - x + 1.0)
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `P[Bin(m, p) = k]`, computed in log space.
pub fn binomial_pmf(m: usize, p: f64, k: usize) -> f64 {
    if k > m {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == m { 1.0 } else { 0.0 };
    }
    (ln_choose(m, k) + k as f64 * p.ln() + (m - k) as f64 * (-p).ln_1p()).exp()
}

/// `μ_i = n C(n-1, i) p^i (1-p)^(n-1-i)`, the expected number of vertices of
/// degree `i`.
pub fn mu_closed_form(n: usize, p: f64, i: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    n as f64 * binomial_pmf(n - 1, p, i)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    /// `Σ_i (q/(q+1))^i μ_i`.
    pub lhs: f64,
    /// `n (1 - p/(q+1))^(n-1)`.
    pub rhs: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

/// Evaluates both sides of `Σ (q/(q+1))^i μ_i = n (1 - p/(q+1))^(n-1)`.
pub fn degree_identity_check(n: usize, p: f64, q: usize) -> IdentityCheck {
    let ratio = q as f64 / (q + 1) as f64;
    let lhs = compensated_sum((0..n).map(|i| ratio.powi(i as i32) * mu_closed_form(n, p, i)));
    let rhs = n as f64 * (1.0 - p / (q + 1) as f64).powi(n.saturating_sub(1) as i32);
    let abs_diff = (lhs - rhs).abs();
    let rel_diff = if rhs == 0.0 { abs_diff } else { abs_diff / rhs.abs() };
    IdentityCheck { lhs, rhs, abs_diff, rel_diff }
}

/// `Σ_v (q/(q+1))^{d(v)}`.
pub fn weighted_degree_sum(g: &Graph, q: usize) -> f64 {
    let ratio = q as f64 / (q + 1) as f64;
    compensated_sum((0..g.n()).map(|v| ratio.powi(g.degree(v) as i32)))
}

/// Degree counts of one graph next to their expectations.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeStats {
    pub n: usize,
    pub p: f64,
    pub q: usize,
    /// `X_i` for `i = 0..n-1`.
    pub counts: Vec<usize>,
    /// `μ_i` for `i = 0..n-1`.
    pub mu: Vec<f64>,
    pub weighted_sum: f64,
    pub weighted_expectation: f64,
}

pub fn degree_stats(g: &Graph, p: f64, q: usize) -> DegreeStats {
    let n = g.n();
    let mut counts = vec![0usize; n.max(1)];
    for v in 0..n {
        counts[g.degree(v)] += 1;
    }
    let mu = (0..n.max(1)).map(|i| mu_closed_form(n, p, i)).collect();
    DegreeStats {
        n,
        p,
        q,
        counts,
        mu,
        weighted_sum: weighted_degree_sum(g, q),
        weighted_expectation: degree_identity_check(n, p, q).rhs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VarianceXk {
    /// `π = P[d(v) = k] = C(n-1, k) p^k (1-p)^(n-1-k)`.
    pub pi: f64,
    pub mean: f64,
    /// `(k/(n-1))^2 / p + (1 - k/(n-1))^2 / (1-p) - 1`.
    pub bracket: f64,
    /// `Cov[Y_i, Y_j] = π^2 · bracket` for `i != j`.
    pub cov: f64,
    pub var: f64,
}

/// Exact mean and variance of `X_k`, the number of degree-`k` vertices.
pub fn variance_xk(n: usize, p: f64, k: usize) -> VarianceXk {
    assert!(n >= 2 && k < n, "need n >= 2 and k <= n - 1");
    let nf = n as f64;
    if p == 0.0 || p == 1.0 {
        let hit = (p == 0.0 && k == 0) || (p == 1.0 && k == n - 1);
        let pi = if hit { 1.0 } else { 0.0 };
        return VarianceXk { pi, mean: nf * pi, bracket: 0.0, cov: 0.0, var: 0.0 };
    }
    let pi = binomial_pmf(n - 1, p, k);
    let x = k as f64 / (nf - 1.0);
    let bracket = x * x / p + (1.0 - x) * (1.0 - x) / (1.0 - p) - 1.0;
    let cov = pi * pi * bracket;
    let var = nf * (pi - pi * pi) + nf * (nf - 1.0) * cov;
    VarianceXk { pi, mean: nf * pi, bracket, cov, var }
}

/// `E[Y_i Y_j]` straight from the two cases of the edge `v_i v_j`.
pub fn joint_degree_probability(n: usize, p: f64, k: usize) -> f64 {
    let with_edge = if k == 0 { 0.0 } else { binomial_pmf(n - 2, p, k - 1) };
    let without = binomial_pmf(n - 2, p, k);
    p * with_edge * with_edge + (1.0 - p) * without * without
}

/// `2 / (9 ln 3)`.
pub fn tail_threshold() -> f64 {
    2.0 / (9.0 * 3f64.ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailSum {
    /// First index of the sum, `⌊9 c ln n⌋`.
    pub start: usize,
    pub sum: f64,
    /// `c > 2 / (9 ln 3)`.
    pub applicable: bool,
    pub threshold: f64,
}

/// `Σ_{i >= 9c ln n} μ_i` for `p = c ln n / n`.
pub fn tail_sum(n: usize, c: f64) -> TailSum {
    let p = crate::graph::log_scaled_p(n, c);
    let start = (9.0 * c * (n as f64).ln()).floor() as usize;
    let sum = compensated_sum((start..n).map(|i| mu_closed_form(n, p, i)));
    let threshold = tail_threshold();
    TailSum { start, sum, applicable: c > threshold, threshold }
}

/// Whether `f(i) = (e n p / i)^i` decreases on `9c ln n <= i <= n - 1`;
/// returns the first index where it fails.
pub fn tail_monotone(n: usize, c: f64) -> Result<(), usize> {
    let p = crate::graph::log_scaled_p(n, c);
    let enp = std::f64::consts::E * n as f64 * p;
    let start = ((9.0 * c * (n as f64).ln()).floor() as usize).max(1);
    let ln_f = |i: usize| i as f64 * (enp / i as f64).ln();
    match (start..n.saturating_sub(1)).find(|&i| ln_f(i + 1) >= ln_f(i)) {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

/// `(Σ 2^{-|A|/(2q-1)}, Σ (q/(q+1))^{|A|})` over the set sizes of a family.
pub fn criterion_sums(sizes: &[usize], q: usize) -> (f64, f64) {
    let scale = (2 * q - 1) as f64;
    let ratio = q as f64 / (q + 1) as f64;
    let waiter_sum = compensated_sum(sizes.iter().map(|&a| (-(a as f64) / scale).exp2()));
    let client = compensated_sum(sizes.iter().map(|&a| ratio.powi(a as i32)));
    (waiter_sum, client)
}

/// Empirical mean and sample variance of `X_k` over `samples` graphs.
pub fn xk_monte_carlo(n: usize, p: f64, k: usize, samples: usize, seed: u64) -> (f64, f64) {
    let xs: Vec<f64> = (0..samples)
        .map(|s| {
            let g = sample_gnp(&RandomGraphSpec::new(n, p, derive_seed(seed, s as u64)).expect("valid parameters"));
            (0..n).filter(|&v| g.degree(v) == k).count() as f64
        })
        .collect();
    mean_var(&xs)
}

/// Mean and unbiased variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / m;
    let var = if xs.len() > 1 { compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (m - 1.0) } else { 0.0 };
    (mean, var)
}

/// Mean degree histogram over `samples` graphs, with per-bin standard errors.
pub fn empirical_degree_counts(n: usize, p: f64, samples: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut sum = vec![0.0f64; n];
    let mut sq = vec![0.0f64; n];
    for s in 0..samples {
        let g = sample_gnp(&RandomGraphSpec::new(n, p, derive_seed(seed, s as u64)).expect("valid parameters"));
        let mut counts = vec![0usize; n];
        for v in 0..n {
            counts[g.degree(v)] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            sum[i] += c as f64;
            sq[i] += (c * c) as f64;
        }
    }
    let m = samples as f64;
    let means: Vec<f64> = sum.iter().map(|s| s / m).collect();
    let se = sum
        .iter()
        .zip(&sq)
        .map(|(s, q)| {
            let mean = s / m;
            let var = if samples > 1 { ((q - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
            (var / m).sqrt()
        })
        .collect();
    (means, se)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_small_case() {
        assert!((mu_closed_form(5, 0.5, 1) - 1.25).abs() < 1e-15);
        assert_eq!(mu_closed_form(7, 0.0, 0), 7.0);
        for (n, p) in [(50, 0.1), (200, 0.05)] {
            let total = compensated_sum((0..n).map(|i| mu_closed_form(n, p, i)));
            assert!((total - n as f64).abs() / n as f64 <= 1e-10);
        }
    }

    #[test]
    fn identity_small_case() {
        let r = degree_identity_check(5, 0.5, 1);
        assert_eq!(r.rhs, 1.58203125);
        assert!(r.abs_diff < 1e-14);
        let r = degree_identity_check(9, 0.0, 3);
        assert_eq!((r.lhs, r.rhs), (9.0, 9.0));
    }

    #[test]
    fn variance_hand_case() {
        let v = variance_xk(4, 0.5, 1);
        assert!((v.pi - 0.375).abs() < 1e-15);
        assert!((v.bracket - 1.0 / 9.0).abs() < 1e-15);
        assert!((v.cov - 0.015625).abs() < 1e-15);
        let direct = joint_degree_probability(4, 0.5, 1) - v.pi * v.pi;
        assert!((direct - v.cov).abs() < 1e-15);
    }

    #[test]
    fn degenerate_variance() {
        let v = variance_xk(10, 0.0, 0);
        assert_eq!((v.mean, v.var), (10.0, 0.0));
    }

    #[test]
    fn tail_threshold_value() {
        assert!((tail_threshold() - 0.202_275_4).abs() < 1e-7);
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        for n in 0..30usize {
            let direct: f64 = (1..=n).map(|i| (i as f64).ln()).sum();
            assert!((ln_gamma(n as f64 + 1.0) - direct).abs() < 1e-10);
        }
        assert!((ln_choose_real(10.0, 3.0) - 120f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn weighted_sum_closed_forms() {
        assert_eq!(weighted_degree_sum(&Graph::new(6), 2), 6.0);
        let k = weighted_degree_sum(&Graph::complete(7), 1);
        assert!((k - 7.0 * 0.5f64.powi(6)).abs() < 1e-15);
    }
}
