//! Binomial confidence intervals and logistic crossover fitting.

use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// `true` when two intervals do not overlap.
pub fn separated(a: (f64, f64), b: (f64, f64)) -> bool {
    a.1 < b.0 || b.1 < a.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Logistic,
    /// The data are (quasi-)separated; the crossover is bracketed by the
    /// neighbouring grid points.
    Bracket,
    /// Every rate is on the same side of one half.
    Degenerate,
}

/// Where the success rate crosses one half.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossover {
    pub c_star: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Fitted `logit P = a + b c` (NaN unless the logistic fit succeeded).
    pub a: f64,
    pub b: f64,
    pub method: FitMethod,
}

/// Fits `logit P(success) = a + b c` to `(c, successes, trials)` by
/// iteratively reweighted least squares and reports `c* = -a / b` with a
/// delta-method 95% interval. Points are sorted first, so the result does
/// not depend on their order. When the fit does not converge, or puts `c*`
/// outside the grid, the crossover is bracketed by adjacent grid points.
pub fn fit_crossover(points: &[(f64, usize, usize)]) -> Crossover {
    let mut pts: Vec<(f64, usize, usize)> = points.iter().copied().filter(|p| p.2 > 0).collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    if let Some(fit) = irls(&pts) {
        let lo = pts.first().map_or(f64::NAN, |p| p.0);
        let hi = pts.last().map_or(f64::NAN, |p| p.0);
        if fit.c_star.is_finite() && fit.c_star >= lo && fit.c_star <= hi && fit.ci_lo.is_finite() {
            return fit;
        }
    }
    bracket(&pts)
}

fn irls(pts: &[(f64, usize, usize)]) -> Option<Crossover> {
    if pts.len() < 2 {
        return None;
    }
    let (mut a, mut b) = (0.0f64, 0.0f64);
    let mut info = [[0.0f64; 2]; 2];
    let mut converged = false;
    for _ in 0..100 {
        let mut grad = [0.0f64; 2];
        info = [[0.0; 2]; 2];
        for &(c, k, n) in pts {
            let eta = a + b * c;
            let p = 1.0 / (1.0 + (-eta).exp());
            let w = n as f64 * p * (1.0 - p);
            let r = k as f64 - n as f64 * p;
            grad[0] += r;
            grad[1] += r * c;
            info[0][0] += w;
            info[0][1] += w * c;
            info[1][1] += w * c * c;
        }
        info[1][0] = info[0][1];
        let det = info[0][0] * info[1][1] - info[0][1] * info[1][0];
        if !(det.abs() > 1e-12) {
            return None;
        }
        let da = (info[1][1] * grad[0] - info[0][1] * grad[1]) / det;
        let db = (info[0][0] * grad[1] - info[1][0] * grad[0]) / det;
        a += da;
        b += db;
        if !a.is_finite() || !b.is_finite() || b.abs() > 1e6 {
            return None;
        }
        if da.abs() < 1e-10 && db.abs() < 1e-10 {
            converged = true;
            break;
        }
    }
    if !converged || b.abs() < 1e-9 {
        return None;
    }
    let det = info[0][0] * info[1][1] - info[0][1] * info[1][0];
    let cov = [[info[1][1] / det, -info[0][1] / det], [-info[1][0] / det, info[0][0] / det]];
    let c_star = -a / b;
    let g = [-1.0 / b, a / (b * b)];
    let var = g[0] * g[0] * cov[0][0] + 2.0 * g[0] * g[1] * cov[0][1] + g[1] * g[1] * cov[1][1];
    if !(var >= 0.0) {
        return None;
    }
    let half = Z95 * var.sqrt();
    Some(Crossover { c_star, ci_lo: c_star - half, ci_hi: c_star + half, a, b, method: FitMethod::Logistic })
}

fn bracket(pts: &[(f64, usize, usize)]) -> Crossover {
    let nan = f64::NAN;
    let above = |p: &(f64, usize, usize)| 2 * p.1 >= p.2;
    let degenerate = |c: f64| Crossover { c_star: c, ci_lo: c, ci_hi: c, a: nan, b: nan, method: FitMethod::Degenerate };
    if pts.is_empty() {
        return degenerate(nan);
    }
    if pts.iter().all(above) {
        return degenerate(pts[0].0);
    }
    if !pts.iter().any(above) {
        return degenerate(pts[pts.len() - 1].0);
    }
    // Between the last point below one half that precedes the first point at
    // or above it.
    let first_above = pts.iter().position(above).expect("some point is above");
    let lo = if first_above == 0 { pts[0].0 } else { pts[first_above - 1].0 };
    let hi = pts[first_above].0;
    Crossover { c_star: 0.5 * (lo + hi), ci_lo: lo, ci_hi: hi, a: nan, b: nan, method: FitMethod::Bracket }
}
