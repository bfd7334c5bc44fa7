//! Online algorithms. All of them interact with the instance only through
//! [`InstanceOracle`] and return a [`Schedule`].

mod force;
mod grr;
mod makespan;
mod sort;

pub use force::force_testing;
pub use grr::{golden_round_robin, grr_closed_form, round_robin};
pub use makespan::{
    makespan_det, makespan_rand, makespan_rand_expected_ratio, makespan_rand_probability, makespan_rand_ratio_bound,
};
pub use sort::{alpha_beta_sort, randomized_sort, standard_test_probability};

use thiserror::Error;

use crate::adversaries::small_upper_limit_policy;
use crate::analysis::minmax::RAND_SORT_BETA;
use crate::oracle::{InstanceOracle, OracleError};
use crate::rng::Seed;
use crate::schedule::Schedule;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AlgorithmError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid parameter {name} = {value}")]
    Parameter { name: &'static str, value: f64 },
    #[error("test probability {value} for job {job} is outside [0, 1]")]
    Probability { job: usize, value: f64 },
    #[error("job {job} is not supported: {reason}")]
    Unsupported { job: usize, reason: &'static str },
}

/// The objective an algorithm is designed for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    SumCompletion,
    Makespan,
}

/// Registry of every implemented algorithm with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Algorithm {
    AlphaBetaSort {
        alpha: f64,
        beta: f64,
    },
    ForceTesting,
    GoldenRoundRobin,
    RandomizedSort {
        beta: f64,
    },
    MakespanDet,
    MakespanRand,
    /// Straw man that runs small-ratio jobs untested first; unbounded ratio.
    SmallUpperLimit {
        lambda: f64,
    },
}

impl Algorithm {
    pub const NAMES: [&'static str; 7] =
        ["ab-sort", "force-testing", "grr", "rand-sort", "makespan-det", "makespan-rand", "small-limit"];

    /// Looks up an algorithm by CLI name, filling in parameters.
    pub fn from_name(name: &str, alpha: Option<f64>, beta: Option<f64>, lambda: Option<f64>) -> Option<Self> {
        Some(match name {
            "ab-sort" => Algorithm::AlphaBetaSort { alpha: alpha.unwrap_or(1.0), beta: beta.unwrap_or(1.0) },
            "force-testing" => Algorithm::ForceTesting,
            "grr" => Algorithm::GoldenRoundRobin,
            "rand-sort" => Algorithm::RandomizedSort { beta: beta.unwrap_or(RAND_SORT_BETA) },
            "makespan-det" => Algorithm::MakespanDet,
            "makespan-rand" => Algorithm::MakespanRand,
            "small-limit" => Algorithm::SmallUpperLimit { lambda: lambda.unwrap_or(2.0) },
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::AlphaBetaSort { .. } => "ab-sort",
            Algorithm::ForceTesting => "force-testing",
            Algorithm::GoldenRoundRobin => "grr",
            Algorithm::RandomizedSort { .. } => "rand-sort",
            Algorithm::MakespanDet => "makespan-det",
            Algorithm::MakespanRand => "makespan-rand",
            Algorithm::SmallUpperLimit { .. } => "small-limit",
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, Algorithm::RandomizedSort { .. } | Algorithm::MakespanRand)
    }

    pub fn objective(&self) -> Objective {
        match self {
            Algorithm::MakespanDet | Algorithm::MakespanRand => Objective::Makespan,
            _ => Objective::SumCompletion,
        }
    }

    /// Runs the algorithm. `seed` is ignored by deterministic algorithms.
    pub fn run(&self, oracle: &mut dyn InstanceOracle, seed: Seed) -> Result<Schedule, AlgorithmError> {
        match *self {
            Algorithm::AlphaBetaSort { alpha, beta } => alpha_beta_sort(oracle, alpha, beta),
            Algorithm::ForceTesting => force_testing(oracle),
            Algorithm::GoldenRoundRobin => golden_round_robin(oracle),
            Algorithm::RandomizedSort { beta } => randomized_sort(oracle, beta, &standard_test_probability(beta), seed),
            Algorithm::MakespanDet => makespan_det(oracle),
            Algorithm::MakespanRand => makespan_rand(oracle, seed),
            Algorithm::SmallUpperLimit { lambda } => small_upper_limit_policy(oracle, lambda),
        }
    }
}

/// Rejects NaN and values below one.
pub(crate) fn check_at_least_one(name: &'static str, value: f64) -> Result<(), AlgorithmError> {
    if value >= 1.0 {
        Ok(())
    } else {
        Err(AlgorithmError::Parameter { name, value })
    }
}
