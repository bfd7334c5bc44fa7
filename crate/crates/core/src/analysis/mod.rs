//! Analytic machinery: the deterministic bound f(α,β), the min-max search
//! behind Randomized-SORT, the contribution audit and Monte Carlo estimates.

pub mod audit;
pub mod bound;
pub mod minmax;
pub mod montecarlo;
pub mod search;

pub use audit::{contribution_audit, AuditError, AuditReport, ContributionCase};
pub use bound::{f_alpha_beta, minimize_f_grid, GridMin};
pub use minmax::{
    lambda_branches, optimize_beta, p_intersection, phat, worst_ratio, AnalysisError, LambdaPair, Line, MinMaxResult,
    WorstCase,
};
pub use montecarlo::{monte_carlo, sample_stats, Accumulator, MonteCarloError, Stats};
