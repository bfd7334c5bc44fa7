//! Makespan algorithms. Jobs are handled independently, in ascending id
//! order; the order does not affect the makespan.

use super::AlgorithmError;
use crate::job::{JobView, GOLDEN_RATIO};
use crate::oracle::InstanceOracle;
use crate::rng::{unit, Seed};
use crate::schedule::{EventKind, Schedule};

fn sequential(
    oracle: &mut dyn InstanceOracle,
    mut test: impl FnMut(&JobView) -> bool,
) -> Result<Schedule, AlgorithmError> {
    let views = oracle.jobs().to_vec();
    let mut schedule = Schedule::new();
    let mut now = 0.0;
    for job in &views {
        if test(job) {
            oracle.commit_test(job.id)?;
            now = schedule.push_run(job.id, EventKind::Test, now, job.t);
            let p = oracle.reveal(job.id)?;
            now = schedule.push_run(job.id, EventKind::TestedRun, now, p);
        } else {
            oracle.commit_untested(job.id)?;
            now = schedule.push_run(job.id, EventKind::UntestedRun, now, job.u);
        }
    }
    Ok(schedule)
}

/// Tests job `j` iff `u_j / t_j >= φ`.
pub fn makespan_det(oracle: &mut dyn InstanceOracle) -> Result<Schedule, AlgorithmError> {
    sequential(oracle, |j| j.tested_under(GOLDEN_RATIO))
}

/// Test probability `1 - 1 / (r^2 - r + 1)`; zero for `r <= 1`, one for a
/// free test.
pub fn makespan_rand_probability(r: f64) -> f64 {
    if r <= 1.0 {
        0.0
    } else if r.is_infinite() {
        1.0
    } else {
        1.0 - 1.0 / (r * r - r + 1.0)
    }
}

/// Per-job bound on the expected ratio: `r^2 / (r^2 - r + 1)`.
pub fn makespan_rand_ratio_bound(r: f64) -> f64 {
    r * r / (r * r - r + 1.0)
}

/// Exact expected ratio `E[ALG] / OPT` of the randomized makespan algorithm
/// on a single job.
pub fn makespan_rand_expected_ratio(u: f64, t: f64, p: f64) -> f64 {
    let r = if t == 0.0 { f64::INFINITY } else { u / t };
    let q = makespan_rand_probability(r);
    let alg = q * (t + p) + (1.0 - q) * u;
    alg / u.min(t + p)
}

/// Tests each job independently with [`makespan_rand_probability`], drawing
/// one uniform per job in ascending id order.
pub fn makespan_rand(oracle: &mut dyn InstanceOracle, seed: Seed) -> Result<Schedule, AlgorithmError> {
    let mut rng = seed.rng();
    sequential(oracle, |j| unit(&mut rng) < makespan_rand_probability(j.ratio()))
}
