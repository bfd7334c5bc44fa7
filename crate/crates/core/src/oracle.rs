//! The algorithm-facing view of an instance.
//!
//! Algorithms receive `&mut dyn InstanceOracle`: upper bounds and testing
//! times are public, processing times are only available through
//! [`InstanceOracle::reveal`]. The full realization is exposed by the separate
//! [`Settle`] trait, which algorithms never get to see.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::job::{Instance, JobView};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Untested,
    Tested,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("job {0} does not exist")]
    UnknownJob(usize),
    #[error("job {0} is already committed")]
    DoubleCommit(usize),
    #[error("job {0} was committed untested and cannot be tested")]
    TestAfterUntested(usize),
}

pub trait InstanceOracle {
    /// Public job data, indexed by id.
    fn jobs(&self) -> &[JobView];

    /// Irrevocably commits to running job `id` untested.
    fn commit_untested(&mut self, id: usize) -> Result<(), OracleError>;

    /// Commits to testing job `id` (on first call) and returns its
    /// processing time. Later calls return the same value.
    fn reveal(&mut self, id: usize) -> Result<f64, OracleError>;

    /// Irrevocably commits to testing job `id` without looking at the result.
    fn commit_test(&mut self, id: usize) -> Result<(), OracleError> {
        self.reveal(id).map(|_| ())
    }

    /// Number of jobs committed so far, tested or not.
    fn decided_count(&self) -> usize;
}

/// The realized instance together with the decision the algorithm made for
/// every job (`None` for jobs it never committed).
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub instance: Instance,
    pub decisions: Vec<Option<Decision>>,
}

/// Access to the realized processing times after a run.
pub trait Settle {
    fn realization(&self) -> Realization;
}

/// Commitment bookkeeping shared by all oracle implementations.
#[derive(Clone, Debug, Default)]
pub struct CommitLog {
    decisions: Vec<Option<Decision>>,
    revealed: Vec<Option<f64>>,
    count: usize,
}

impl CommitLog {
    pub fn new(n: usize) -> Self {
        CommitLog { decisions: vec![None; n], revealed: vec![None; n], count: 0 }
    }

    pub fn decision(&self, id: usize) -> Option<Decision> {
        self.decisions.get(id).copied().flatten()
    }

    pub fn decisions(&self) -> &[Option<Decision>] {
        &self.decisions
    }

    pub fn revealed(&self, id: usize) -> Option<f64> {
        self.revealed.get(id).copied().flatten()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Records an untested commitment; returns the number of decided jobs
    /// including this one.
    pub fn commit_untested(&mut self, id: usize) -> Result<usize, OracleError> {
        match self.decisions.get(id) {
            None => Err(OracleError::UnknownJob(id)),
            Some(Some(_)) => Err(OracleError::DoubleCommit(id)),
            Some(None) => {
                self.decisions[id] = Some(Decision::Untested);
                self.count += 1;
                Ok(self.count)
            }
        }
    }

    /// Resolves a test request. `decide` is called exactly once per job, with
    /// the number of decided jobs including this one, and its value is frozen.
    pub fn reveal_with(&mut self, id: usize, decide: impl FnOnce(usize) -> f64) -> Result<f64, OracleError> {
        match self.decisions.get(id) {
            None => Err(OracleError::UnknownJob(id)),
            Some(Some(Decision::Untested)) => Err(OracleError::TestAfterUntested(id)),
            Some(Some(Decision::Tested)) => Ok(self.revealed[id].expect("tested job has a value")),
            Some(None) => {
                self.decisions[id] = Some(Decision::Tested);
                self.count += 1;
                let p = decide(self.count);
                self.revealed[id] = Some(p);
                Ok(p)
            }
        }
    }
}

/// An instance whose processing times are fixed in advance.
#[derive(Clone, Debug)]
pub struct StaticOracle {
    instance: Instance,
    views: Vec<JobView>,
    log: CommitLog,
}

impl StaticOracle {
    pub fn new(instance: Instance) -> Self {
        let views = instance.views();
        let log = CommitLog::new(instance.len());
        StaticOracle { instance, views, log }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn decision(&self, id: usize) -> Option<Decision> {
        self.log.decision(id)
    }
}

impl InstanceOracle for StaticOracle {
    fn jobs(&self) -> &[JobView] {
        &self.views
    }

    fn commit_untested(&mut self, id: usize) -> Result<(), OracleError> {
        self.log.commit_untested(id).map(|_| ())
    }

    fn reveal(&mut self, id: usize) -> Result<f64, OracleError> {
        let p = self.instance.jobs.get(id).map(|j| j.p).unwrap_or(0.0);
        self.log.reveal_with(id, |_| p)
    }

    fn decided_count(&self) -> usize {
        self.log.count()
    }
}

impl Settle for StaticOracle {
    fn realization(&self) -> Realization {
        Realization { instance: self.instance.clone(), decisions: self.log.decisions().to_vec() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_jobs() -> StaticOracle {
        StaticOracle::new(Instance::from_triples([(2.0, 1.0, 0.5), (3.0, 1.0, 2.0)]))
    }

    #[test]
    fn reveal_is_idempotent() {
        let mut o = two_jobs();
        assert_eq!(o.reveal(1), Ok(2.0));
        assert_eq!(o.reveal(1), Ok(2.0));
        assert_eq!(o.decided_count(), 1);
        assert_eq!(o.decision(1), Some(Decision::Tested));
    }

    #[test]
    fn commitments_are_irrevocable() {
        let mut o = two_jobs();
        o.commit_untested(0).unwrap();
        assert_eq!(o.commit_untested(0), Err(OracleError::DoubleCommit(0)));
        assert_eq!(o.reveal(0), Err(OracleError::TestAfterUntested(0)));
        o.reveal(1).unwrap();
        assert_eq!(o.commit_untested(1), Err(OracleError::DoubleCommit(1)));
        assert_eq!(o.reveal(7), Err(OracleError::UnknownJob(7)));
        assert_eq!(o.decided_count(), 2);
    }

    #[test]
    fn realization_reports_decisions() {
        let mut o = two_jobs();
        o.reveal(0).unwrap();
        let r = o.realization();
        assert_eq!(r.decisions, vec![Some(Decision::Tested), None]);
        assert_eq!(r.instance.jobs[1].p, 2.0);
    }
}
