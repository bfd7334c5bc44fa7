//! Min-max tuning of the randomized test probability.
//!
//! For a job with ratio `r = u/t`, Randomized-SORT tests with probability
//! `p`. The per-job charge is bounded by the larger of two linear functions
//! of `p`, one for jobs whose optimal running time is `u` and one for jobs
//! whose optimal running time is `t + p`. The probability `p(r)` equalizes
//! them; capping at 1 gives `p̂(r)`. The worst ratio for a given β is the
//! maximum of the resulting charge over `r ≥ 1`.

use thiserror::Error;

use super::search::{golden_max, golden_min, grid_len, grid_point, refined_max};

/// β found by the parameter search, to four decimals.
pub const RAND_SORT_BETA: f64 = 1.2574;

#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum AnalysisError {
    #[error("p(r) is undefined at r = {r}, beta = {beta}: denominator {denominator}")]
    Denominator { r: f64, beta: f64, denominator: f64 },
    #[error("parameter {name} = {value} is out of range")]
    Parameter { name: &'static str, value: f64 },
}

/// `slope * p + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn at(&self, p: f64) -> f64 {
        self.slope * p + self.intercept
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaPair {
    pub beta: f64,
    pub r: f64,
    /// Branch for jobs with `ρ = u`.
    pub f_u: Line,
    /// Branch for jobs with `ρ = t + p`.
    pub f_t: Line,
}

impl LambdaPair {
    /// Larger of the two branches at `p`.
    pub fn value(&self, p: f64) -> f64 {
        self.f_u.at(p).max(self.f_t.at(p))
    }

    /// Solves `f_u(p) = f_t(p)` directly. `None` for parallel branches.
    pub fn intersection(&self) -> Option<(f64, f64)> {
        let ds = self.f_u.slope - self.f_t.slope;
        if ds == 0.0 {
            return None;
        }
        let p = (self.f_t.intercept - self.f_u.intercept) / ds;
        Some((p, self.f_u.at(p)))
    }
}

fn max_term(beta: f64, r: f64) -> f64 {
    ((1.0 + beta) / r).max(1.0 + 1.0 / beta).max(1.0 + 1.0 / r)
}

pub fn lambda_branches(beta: f64, r: f64) -> LambdaPair {
    let m = max_term(beta, r);
    let f_u = Line { slope: 1.0 / r - 1.0 - 1.0 / beta + m, intercept: 2.0 + 1.0 / beta };
    let f_t = Line { slope: 2.0 + beta - (2.0 + 1.0 / beta) * r, intercept: (2.0 + 1.0 / beta) * r };
    LambdaPair { beta, r, f_u, f_t }
}

/// Closed-form intersection `p(r)` of the two branches, uncapped.
pub fn p_intersection(r: f64, beta: f64) -> Result<f64, AnalysisError> {
    let r2 = r * r;
    let num = r2 + 2.0 * beta * r2 - r - 2.0 * beta * r;
    let den = r2 + 2.0 * beta * r2 - r - 3.0 * beta * r - beta * beta * r + beta + beta * r * max_term(beta, r);
    if !(den > 0.0) {
        return Err(AnalysisError::Denominator { r, beta, denominator: den });
    }
    Ok(num / den)
}

/// `min(p(r), 1)` for `r ≥ 1`.
pub fn phat(r: f64, beta: f64) -> Result<f64, AnalysisError> {
    if !(r >= 1.0) {
        return Err(AnalysisError::Parameter { name: "r", value: r });
    }
    if !(beta >= 1.0) {
        return Err(AnalysisError::Parameter { name: "beta", value: beta });
    }
    if r == f64::INFINITY {
        return Ok(1.0);
    }
    Ok(p_intersection(r, beta)?.min(1.0))
}

/// Per-job charge `g(r)`: the larger branch at `p̂(r)`.
pub fn g(r: f64, beta: f64) -> Result<f64, AnalysisError> {
    let p = phat(r, beta)?;
    Ok(lambda_branches(beta, r).value(p))
}

fn g_or_nan(r: f64, beta: f64) -> f64 {
    g(r, beta).unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioSearch {
    pub r_max: f64,
    pub step: f64,
    pub tol: f64,
}

impl Default for RatioSearch {
    fn default() -> Self {
        RatioSearch { r_max: 100.0, step: 1e-4, tol: 1e-8 }
    }
}

impl RatioSearch {
    /// Coarser grid used inside the β scan.
    pub const COARSE: RatioSearch = RatioSearch { r_max: 100.0, step: 1e-3, tol: 1e-8 };
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorstCase {
    pub ratio: f64,
    pub r_star: f64,
}

pub fn worst_ratio_with(beta: f64, search: RatioSearch) -> WorstCase {
    let (r_star, ratio) = refined_max(1.0, search.r_max, search.step, search.tol, |r| g_or_nan(r, beta));
    WorstCase { ratio, r_star }
}

/// Maximum of `g` over `r ∈ [1, 100]`.
pub fn worst_ratio(beta: f64) -> WorstCase {
    worst_ratio_with(beta, RatioSearch::default())
}

/// Smallest `r` with `p(r) ≥ 1`, or `None` if there is none below `r_max`.
pub fn cap_threshold(beta: f64, r_max: f64) -> Option<f64> {
    let above = |r: f64| p_intersection(r, beta).is_ok_and(|p| p >= 1.0);
    let step = 1e-3;
    let mut lo = 1.0;
    let mut hi = None;
    for i in 1..grid_len(1.0, r_max, step) {
        let r = grid_point(1.0, step, i);
        if above(r) {
            hi = Some(r);
            break;
        }
        lo = r;
    }
    let mut hi = hi?;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Maximum of `g` over the capped region `[r̂, r_max]`.
pub fn capped_region_max(beta: f64, r_hat: f64, search: RatioSearch) -> f64 {
    refined_max(r_hat, search.r_max, search.step, search.tol, |r| g_or_nan(r, beta)).1
}

/// Checks that on `[r_from, r_max]` the `ρ = u` branch at `p = 1` is
/// non-increasing and `g` never exceeds `2 + β`, so truncating the search at
/// `r_max` loses nothing. Returns the first offending `r`.
pub fn tail_violation(beta: f64, r_from: f64, search: RatioSearch) -> Option<f64> {
    let bound = 2.0 + beta;
    let mut prev = f64::INFINITY;
    for i in 0..grid_len(r_from, search.r_max, search.step) {
        let r = grid_point(r_from, search.step, i);
        let fu = lambda_branches(beta, r).f_u.at(1.0);
        let gr = g_or_nan(r, beta);
        if fu > prev + 1e-12 || !(gr <= bound + 1e-9) {
            return Some(r);
        }
        prev = fu;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinMaxResult {
    pub beta_star: f64,
    pub worst_ratio: f64,
    pub r_star: f64,
    pub r_hat: f64,
    pub capped_region_max: f64,
}

/// Minimizes `worst_ratio(β)` over `[lo, hi]`: a grid at step `1e-3`, then
/// golden-section refinement to `1e-6` around the best grid point. The inner
/// maximization uses a `1e-3` grid during the scan and the full `1e-4` grid
/// for the reported values.
pub fn optimize_beta(lo: f64, hi: f64) -> Result<MinMaxResult, AnalysisError> {
    if !(lo >= 1.0) {
        return Err(AnalysisError::Parameter { name: "lo", value: lo });
    }
    if !(hi >= lo) {
        return Err(AnalysisError::Parameter { name: "hi", value: hi });
    }
    let step = 1e-3;
    let coarse = |b: f64| worst_ratio_with(b, RatioSearch::COARSE).ratio;
    let mut best = (lo, f64::INFINITY);
    for i in 0..grid_len(lo, hi, step) {
        let b = grid_point(lo, step, i).min(hi);
        let v = coarse(b);
        if v < best.1 {
            best = (b, v);
        }
    }
    let (b1, v1) = golden_min((best.0 - step).max(lo), (best.0 + step).min(hi), 1e-6, coarse);
    let beta_star = if v1 < best.1 { b1 } else { best.0 };

    let search = RatioSearch::default();
    let worst = worst_ratio_with(beta_star, search);
    let r_hat = cap_threshold(beta_star, search.r_max).unwrap_or(search.r_max);
    Ok(MinMaxResult {
        beta_star,
        worst_ratio: worst.ratio,
        r_star: worst.r_star,
        r_hat,
        capped_region_max: capped_region_max(beta_star, r_hat, search),
    })
}

/// Golden-section maximum of `g` on `[a, b]`, exposed for probes.
pub fn local_max(beta: f64, a: f64, b: f64) -> (f64, f64) {
    golden_max(a, b, 1e-10, |r| g_or_nan(r, beta))
}
