//! Jobs and static instances.

use alloc::vec::Vec;

/// `(1 + sqrt 5) / 2`, the test threshold of Golden Round Robin and the
/// deterministic makespan algorithm.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// A job with its hidden processing time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Job {
    pub id: usize,
    /// Upper bound: running time when executed untested.
    pub u: f64,
    /// Testing time.
    pub t: f64,
    /// Processing time after a test, `0 <= p <= u`.
    pub p: f64,
}

impl Job {
    pub fn new(id: usize, u: f64, t: f64, p: f64) -> Self {
        Job { id, u, t, p }
    }

    /// The part of the job an algorithm is allowed to see.
    pub fn view(&self) -> JobView {
        JobView { id: self.id, u: self.u, t: self.t }
    }

    /// `u / t`; `+inf` for a free test.
    pub fn ratio(&self) -> f64 {
        self.view().ratio()
    }

    pub fn optimal_runtime(&self) -> f64 {
        optimal_runtime(self)
    }

    /// True when the job satisfies `t >= 0` and `0 <= p <= u` with finite values.
    pub fn is_valid(&self) -> bool {
        self.u.is_finite()
            && self.t.is_finite()
            && self.p.is_finite()
            && self.t >= 0.0
            && self.p >= 0.0
            && self.p <= self.u
    }
}

/// Public part of a job: id, upper bound and testing time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JobView {
    pub id: usize,
    pub u: f64,
    pub t: f64,
}

impl JobView {
    pub fn ratio(&self) -> f64 {
        if self.t == 0.0 {
            f64::INFINITY
        } else {
            self.u / self.t
        }
    }

    /// Threshold rule shared by SORT, Golden Round Robin and the makespan
    /// algorithm: test iff `u >= threshold * t`. Free tests are always taken.
    pub fn tested_under(&self, threshold: f64) -> bool {
        self.t == 0.0 || self.u >= threshold * self.t
    }
}

/// `min(u, t + p)`: the time an offline optimum spends on the job.
pub fn optimal_runtime(job: &Job) -> f64 {
    job.u.min(job.t + job.p)
}

/// A static instance. Job ids equal their position in `jobs`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Instance {
    pub jobs: Vec<Job>,
}

impl Instance {
    /// Builds an instance from `(u, t, p)` triples, numbering jobs from zero.
    pub fn from_triples<I>(triples: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let jobs = triples.into_iter().enumerate().map(|(id, (u, t, p))| Job::new(id, u, t, p)).collect();
        Instance { jobs }
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn views(&self) -> Vec<JobView> {
        self.jobs.iter().map(Job::view).collect()
    }

    /// Index of the first job violating the model, if any. Ids must be
    /// `0..n` in order.
    pub fn first_invalid(&self) -> Option<usize> {
        self.jobs.iter().enumerate().position(|(i, j)| j.id != i || !j.is_valid())
    }

    /// Appends the jobs of `other`, renumbering them after the existing ones.
    pub fn extend_with(&mut self, other: &Instance) {
        let base = self.jobs.len();
        self.jobs.extend(other.jobs.iter().enumerate().map(|(i, j)| Job::new(base + i, j.u, j.t, j.p)));
    }

    pub fn optimal_runtimes(&self) -> Vec<f64> {
        self.jobs.iter().map(optimal_runtime).collect()
    }
}
