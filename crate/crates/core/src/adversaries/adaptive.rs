//! The adaptive adversary for unit testing times and a common upper bound.
//!
//! Processing times are fixed at the moment the algorithm commits to a job:
//! untested jobs get `p = 0`, tested jobs get `p = ū`, except that once more
//! than `δ n` jobs are decided every further job gets `p = 0`.

use alloc::vec::Vec;

use super::FamilyError;
use crate::job::{Instance, Job, JobView};
use crate::oracle::{CommitLog, Decision, InstanceOracle, OracleError, Realization, Settle};

#[derive(Clone, Debug)]
pub struct AdaptiveAdversary {
    delta: f64,
    u_bar: f64,
    views: Vec<JobView>,
    log: CommitLog,
}

impl AdaptiveAdversary {
    pub fn new(n: usize, delta: f64, u_bar: f64) -> Result<Self, FamilyError> {
        let err = |name, value| FamilyError::Parameter { family: "adaptive", name, value };
        if n == 0 {
            return Err(err("n", 0.0));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(err("delta", delta));
        }
        if !(u_bar >= 1.0 && u_bar.is_finite()) {
            return Err(err("u_bar", u_bar));
        }
        let views = (0..n).map(|id| JobView { id, u: u_bar, t: 1.0 }).collect();
        Ok(AdaptiveAdversary { delta, u_bar, views, log: CommitLog::new(n) })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn u_bar(&self) -> f64 {
        self.u_bar
    }

    pub fn decisions_made(&self) -> usize {
        self.log.count()
    }

    /// Fixes the processing time of `id` at its commitment. The `k`-th decided
    /// job (counting from one) is adversarial iff it is tested and `k <= δ n`.
    pub fn adaptive_reveal(&mut self, id: usize, was_tested: bool) -> Result<f64, OracleError> {
        if was_tested {
            let cap = self.delta * self.views.len() as f64;
            let u_bar = self.u_bar;
            self.log.reveal_with(id, |k| if (k as f64) <= cap { u_bar } else { 0.0 })
        } else {
            self.log.commit_untested(id).map(|_| 0.0)
        }
    }
}

impl InstanceOracle for AdaptiveAdversary {
    fn jobs(&self) -> &[JobView] {
        &self.views
    }

    fn commit_untested(&mut self, id: usize) -> Result<(), OracleError> {
        self.adaptive_reveal(id, false).map(|_| ())
    }

    fn reveal(&mut self, id: usize) -> Result<f64, OracleError> {
        self.adaptive_reveal(id, true)
    }

    fn decided_count(&self) -> usize {
        self.log.count()
    }
}

impl Settle for AdaptiveAdversary {
    fn realization(&self) -> Realization {
        let jobs =
            self.views.iter().map(|v| Job::new(v.id, v.u, v.t, self.log.revealed(v.id).unwrap_or(0.0))).collect();
        let decisions: Vec<Option<Decision>> = self.log.decisions().to_vec();
        Realization { instance: Instance { jobs }, decisions }
    }
}
