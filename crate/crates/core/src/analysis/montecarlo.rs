//! Seeded Monte Carlo estimates of expected competitive ratios.

use thiserror::Error;

use crate::algorithms::{Algorithm, AlgorithmError, Objective};
use crate::oracle::{InstanceOracle, Settle};
use crate::rng::Seed;
use crate::schedule::{outcome_from_schedule, ScheduleError};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Running mean and variance (Welford), mergeable across partitions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Accumulator {
    count: usize,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Default for Accumulator {
    fn default() -> Self {
        Accumulator { count: 0, mean: 0.0, m2: 0.0, min: f64::INFINITY, max: f64::NEG_INFINITY }
    }
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&mut self, other: &Accumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `None` when nothing was pushed.
    pub fn stats(&self) -> Option<Stats> {
        if self.count == 0 {
            return None;
        }
        let std = if self.count < 2 { 0.0 } else { libm::sqrt(self.m2 / (self.count - 1) as f64) };
        let half = Z95 * std / libm::sqrt(self.count as f64);
        Some(Stats {
            trials: self.count,
            mean: self.mean,
            std,
            ci_lo: self.mean - half,
            ci_hi: self.mean + half,
            min: self.min,
            max: self.max,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stats {
    pub trials: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub std: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    /// A single trial gives a zero-width interval that says nothing.
    pub fn is_degenerate(&self) -> bool {
        self.trials < 2
    }

    pub fn standard_error(&self) -> f64 {
        self.std / libm::sqrt(self.trials as f64)
    }

    pub fn ci_contains(&self, x: f64) -> bool {
        self.ci_lo <= x && x <= self.ci_hi
    }
}

pub fn sample_stats(samples: impl IntoIterator<Item = f64>) -> Option<Stats> {
    let mut acc = Accumulator::new();
    for x in samples {
        acc.push(x);
    }
    acc.stats()
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MonteCarloError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("trial {trial}: {source}")]
    Algorithm { trial: usize, source: AlgorithmError },
    #[error("trial {trial}: {source}")]
    Schedule { trial: usize, source: ScheduleError },
}

/// Runs `trials` independent trials of `alg`. Trial `i` gets a fresh oracle
/// from `factory(i)` and the seed `(base_seed, i)`. The sample is the ratio for
/// the algorithm's objective.
pub fn monte_carlo<O, F>(
    alg: &Algorithm,
    mut factory: F,
    trials: usize,
    base_seed: u64,
) -> Result<Stats, MonteCarloError>
where
    O: InstanceOracle + Settle,
    F: FnMut(usize) -> O,
{
    if trials == 0 {
        return Err(MonteCarloError::NoTrials);
    }
    let mut acc = Accumulator::new();
    for trial in 0..trials {
        let mut oracle = factory(trial);
        let schedule = alg
            .run(&mut oracle, Seed::new(base_seed, trial as u64))
            .map_err(|source| MonteCarloError::Algorithm { trial, source })?;
        let out =
            outcome_from_schedule(&schedule, &oracle).map_err(|source| MonteCarloError::Schedule { trial, source })?;
        acc.push(match alg.objective() {
            Objective::SumCompletion => out.ratio_sum,
            Objective::Makespan => out.ratio_makespan,
        });
    }
    Ok(acc.stats().expect("at least one trial"))
}
