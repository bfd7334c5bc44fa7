//! The competitive-ratio bound of (α,β)-SORT.

use super::search::{grid_len, grid_point};

/// `max(α, 1 + 1/α) + max((1 + 1/β) α, 1 + 1/α, 1 + β)`.
pub fn f_alpha_beta(alpha: f64, beta: f64) -> f64 {
    alpha.max(1.0 + 1.0 / alpha) + ((1.0 + 1.0 / beta) * alpha).max(1.0 + 1.0 / alpha).max(1.0 + beta)
}

/// Contribution bound factor `max((1 + 1/β) α, 1 + 1/α, 1 + β)`.
pub fn contribution_factor(alpha: f64, beta: f64) -> f64 {
    ((1.0 + 1.0 / beta) * alpha).max(1.0 + 1.0 / alpha).max(1.0 + beta)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMin {
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
}

/// Minimizes `f(α, β)` over the square grid `[lo, hi]^2` with spacing `step`.
/// The first minimizer in (α, β) lexicographic order wins ties.
pub fn minimize_f_grid(lo: f64, hi: f64, step: f64) -> GridMin {
    let len = grid_len(lo, hi, step);
    let mut best = GridMin { alpha: lo, beta: lo, value: f64::INFINITY };
    for i in 0..len {
        let alpha = grid_point(lo, step, i);
        for k in 0..len {
            let beta = grid_point(lo, step, k);
            let value = f_alpha_beta(alpha, beta);
            if value < best.value {
                best = GridMin { alpha, beta, value };
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::GOLDEN_RATIO;

    #[test]
    fn value_at_one_one() {
        assert_eq!(f_alpha_beta(1.0, 1.0), 4.0);
        assert_eq!(contribution_factor(1.0, 1.0), 2.0);
    }

    #[test]
    fn golden_first_term() {
        let phi = GOLDEN_RATIO;
        let first = phi.max(1.0 + 1.0 / phi);
        assert!((first - phi).abs() < 1e-15);
        assert!((f_alpha_beta(phi, 1.0) - (phi + 2.0 * phi)).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_minimum() {
        let m = minimize_f_grid(1.0, 3.0, 0.05);
        assert_eq!((m.alpha, m.beta, m.value), (1.0, 1.0, 4.0));
    }
}
