//! Schedule event logs and their evaluation against the offline optimum.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::opt::{opt_makespan, opt_sum_completion};
use crate::oracle::{Decision, Realization, Settle};
use crate::{approx_eq, TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    UntestedRun,
    Test,
    TestedRun,
    /// A processor-sharing interval: every job of the share set runs at rate
    /// `1 / |share_set|`.
    SharedSlice,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::UntestedRun => "untested_run",
            EventKind::Test => "test",
            EventKind::TestedRun => "tested_run",
            EventKind::SharedSlice => "shared_slice",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "untested_run" => EventKind::UntestedRun,
            "test" => EventKind::Test,
            "tested_run" => EventKind::TestedRun,
            "shared_slice" => EventKind::SharedSlice,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleEvent {
    pub job_id: usize,
    pub kind: EventKind,
    pub start: f64,
    pub end: f64,
    /// Jobs sharing the machine; only set for [`EventKind::SharedSlice`].
    pub share_set: Option<Arc<[usize]>>,
}

impl ScheduleEvent {
    pub fn full_rate(job_id: usize, kind: EventKind, start: f64, end: f64) -> Self {
        ScheduleEvent { job_id, kind, start, end, share_set: None }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    /// Work this event performs on its job.
    pub fn work(&self) -> f64 {
        match &self.share_set {
            Some(set) if !set.is_empty() => self.duration() / set.len() as f64,
            _ => self.duration(),
        }
    }
}

/// An ordered log of timed events.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Schedule {
    pub events: Vec<ScheduleEvent>,
}

impl Schedule {
    pub fn new() -> Self {
        Schedule::default()
    }

    /// Appends a full-rate event of length `duration` starting at `start` and
    /// returns its end.
    pub fn push_run(&mut self, job_id: usize, kind: EventKind, start: f64, duration: f64) -> f64 {
        let end = start + duration;
        self.events.push(ScheduleEvent::full_rate(job_id, kind, start, end));
        end
    }

    /// Completion time per job (end of its last event), `None` for jobs
    /// without events.
    pub fn completion_times(&self, n: usize) -> Vec<Option<f64>> {
        let mut c: Vec<Option<f64>> = vec![None; n];
        for e in &self.events {
            if let Some(slot) = c.get_mut(e.job_id) {
                *slot = Some(slot.map_or(e.end, |v: f64| v.max(e.end)));
            }
        }
        c
    }

    /// Total work performed on each job, split by event kind.
    pub fn work_by_job(&self, n: usize) -> Vec<JobWork> {
        let mut w = vec![JobWork::default(); n];
        for e in &self.events {
            if let Some(slot) = w.get_mut(e.job_id) {
                match e.kind {
                    EventKind::UntestedRun => slot.untested += e.work(),
                    EventKind::Test => slot.test += e.work(),
                    EventKind::TestedRun => slot.tested_run += e.work(),
                    EventKind::SharedSlice => slot.shared += e.work(),
                }
                slot.events += 1;
            }
        }
        w
    }

    /// Busy intervals of the machine, sorted by start. A processor-sharing
    /// interval appears once. Zero-length events are skipped.
    pub fn busy_intervals(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut last_shared: Option<(f64, f64)> = None;
        for e in &self.events {
            if e.end <= e.start {
                continue;
            }
            if e.kind == EventKind::SharedSlice {
                if last_shared == Some((e.start, e.end)) {
                    continue;
                }
                last_shared = Some((e.start, e.end));
            }
            out.push((e.start, e.end));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        out
    }

    /// Total idle time between 0 and the last event end.
    pub fn idle_time(&self) -> f64 {
        let mut idle = 0.0;
        let mut cursor = 0.0f64;
        for (s, e) in self.busy_intervals() {
            if s > cursor {
                idle += s - cursor;
            }
            cursor = cursor.max(e);
        }
        idle
    }
}

/// Work performed on one job, by event kind.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct JobWork {
    pub untested: f64,
    pub test: f64,
    pub tested_run: f64,
    pub shared: f64,
    pub events: usize,
}

impl JobWork {
    pub fn total(&self) -> f64 {
        self.untested + self.test + self.tested_run + self.shared
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("event {index} refers to unknown job {job}")]
    UnknownJob { index: usize, job: usize },
    #[error("event {index} has an invalid interval [{start}, {end}]")]
    InvalidInterval { index: usize, start: f64, end: f64 },
    #[error("event {index} has a share set that does not match its interval group")]
    BadShareSet { index: usize },
    #[error("machine is double-booked around time {time}")]
    Overlap { time: f64 },
    #[error("job {job} has no events")]
    Missing { job: usize },
    #[error("job {job} was never committed to a decision")]
    Undecided { job: usize },
    #[error("job {job} has events inconsistent with its test decision")]
    WrongKind { job: usize },
    #[error("job {job} received work {got}, expected {expected}")]
    Uncovered { job: usize, expected: f64, got: f64 },
    #[error("job {job} runs before its test has finished")]
    RunBeforeTest { job: usize },
}

/// Objective values of a schedule against the offline optimum.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub completion: Vec<f64>,
    pub sum_completion: f64,
    pub makespan: f64,
    pub opt_sum: f64,
    pub opt_makespan: f64,
    pub ratio_sum: f64,
    pub ratio_makespan: f64,
}

fn ratio(alg: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        alg / opt
    } else if alg > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= TOL * scale.max(1.0)
}

/// Validates `schedule` against the oracle's realization and evaluates it.
pub fn outcome_from_schedule(schedule: &Schedule, oracle: &dyn Settle) -> Result<Outcome, ScheduleError> {
    outcome_from_realization(schedule, &oracle.realization())
}

/// [`outcome_from_schedule`] on an already extracted realization.
pub fn outcome_from_realization(schedule: &Schedule, real: &Realization) -> Result<Outcome, ScheduleError> {
    let jobs = &real.instance.jobs;
    let n = jobs.len();
    let horizon = schedule.events.iter().fold(0.0f64, |m, e| m.max(e.end.abs()));

    validate_events(schedule, n)?;

    let work = schedule.work_by_job(n);
    for (job, w) in jobs.iter().zip(&work) {
        let id = job.id;
        if w.events == 0 {
            return Err(ScheduleError::Missing { job: id });
        }
        let scale = horizon.max(job.u + job.t);
        match real.decisions.get(id).copied().flatten() {
            None => return Err(ScheduleError::Undecided { job: id }),
            Some(Decision::Untested) => {
                if w.test != 0.0 || w.tested_run != 0.0 {
                    return Err(ScheduleError::WrongKind { job: id });
                }
                if !close(w.total(), job.u, scale) {
                    return Err(ScheduleError::Uncovered { job: id, expected: job.u, got: w.total() });
                }
            }
            Some(Decision::Tested) => {
                if w.untested != 0.0 {
                    return Err(ScheduleError::WrongKind { job: id });
                }
                let expected = job.t + job.p;
                if !close(w.total(), expected, scale) {
                    return Err(ScheduleError::Uncovered { job: id, expected, got: w.total() });
                }
                if w.shared == 0.0 && !close(w.test, job.t, scale) {
                    return Err(ScheduleError::Uncovered { job: id, expected: job.t, got: w.test });
                }
            }
        }
    }
    check_test_precedes_run(schedule, n, horizon)?;

    let completion: Vec<f64> = schedule.completion_times(n).into_iter().map(|c| c.unwrap_or(0.0)).collect();
    let sum_completion: f64 = completion.iter().sum();
    let makespan = completion.iter().fold(0.0f64, |m, &c| m.max(c));
    let opt_sum = opt_sum_completion(&real.instance);
    let opt_mk = opt_makespan(&real.instance);
    Ok(Outcome {
        sum_completion,
        makespan,
        opt_sum,
        opt_makespan: opt_mk,
        ratio_sum: ratio(sum_completion, opt_sum),
        ratio_makespan: ratio(makespan, opt_mk),
        completion,
    })
}

fn validate_events(schedule: &Schedule, n: usize) -> Result<(), ScheduleError> {
    let events = &schedule.events;
    let mut i = 0;
    while i < events.len() {
        let e = &events[i];
        if e.job_id >= n {
            return Err(ScheduleError::UnknownJob { index: i, job: e.job_id });
        }
        if !(e.start.is_finite() && e.end.is_finite()) || e.start < -TOL || e.end < e.start {
            return Err(ScheduleError::InvalidInterval { index: i, start: e.start, end: e.end });
        }
        match (&e.share_set, e.kind) {
            (Some(set), EventKind::SharedSlice) => {
                // The group of consecutive events on this interval must list
                // every member of the share set exactly once.
                let mut group = vec![e.job_id];
                let mut k = i + 1;
                while k < events.len()
                    && events[k].kind == EventKind::SharedSlice
                    && events[k].start == e.start
                    && events[k].end == e.end
                    && events[k].share_set.as_ref() == Some(set)
                {
                    group.push(events[k].job_id);
                    k += 1;
                }
                let mut members: Vec<usize> = set.to_vec();
                members.sort_unstable();
                group.sort_unstable();
                if members != group {
                    return Err(ScheduleError::BadShareSet { index: i });
                }
                i = k;
            }
            (None, EventKind::SharedSlice) | (Some(_), _) => {
                return Err(ScheduleError::BadShareSet { index: i });
            }
            (None, _) => i += 1,
        }
    }

    let busy = schedule.busy_intervals();
    for w in busy.windows(2) {
        let (_, prev_end) = w[0];
        let (next_start, _) = w[1];
        if next_start < prev_end && !approx_eq(next_start, prev_end) {
            return Err(ScheduleError::Overlap { time: next_start });
        }
    }
    Ok(())
}

fn check_test_precedes_run(schedule: &Schedule, n: usize, horizon: f64) -> Result<(), ScheduleError> {
    let mut test_end = vec![f64::NEG_INFINITY; n];
    let mut run_start = vec![f64::INFINITY; n];
    for e in &schedule.events {
        match e.kind {
            EventKind::Test => test_end[e.job_id] = test_end[e.job_id].max(e.end),
            EventKind::TestedRun => run_start[e.job_id] = run_start[e.job_id].min(e.start),
            _ => {}
        }
    }
    for job in 0..n {
        if run_start[job].is_finite() && run_start[job] < test_end[job] - TOL * horizon.max(1.0) {
            return Err(ScheduleError::RunBeforeTest { job });
        }
        if run_start[job].is_finite() && !test_end[job].is_finite() {
            return Err(ScheduleError::RunBeforeTest { job });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::Instance;
    use crate::oracle::{InstanceOracle, StaticOracle};

    fn oracle(triples: &[(f64, f64, f64)]) -> StaticOracle {
        StaticOracle::new(Instance::from_triples(triples.iter().copied()))
    }

    #[test]
    fn single_untested_run() {
        let mut o = oracle(&[(5.0, 6.0, 1.0)]);
        o.commit_untested(0).unwrap();
        let mut s = Schedule::new();
        s.push_run(0, EventKind::UntestedRun, 0.0, 5.0);
        let out = outcome_from_schedule(&s, &o).unwrap();
        assert_eq!(out.sum_completion, 5.0);
        assert_eq!(out.ratio_sum, 1.0);
        assert_eq!(out.makespan, 5.0);
    }

    #[test]
    fn zero_processing_after_test() {
        let mut o = oracle(&[(3.0, 1.0, 0.0)]);
        assert_eq!(o.reveal(0), Ok(0.0));
        let mut s = Schedule::new();
        let end = s.push_run(0, EventKind::Test, 0.0, 1.0);
        s.push_run(0, EventKind::TestedRun, end, 0.0);
        let out = outcome_from_schedule(&s, &o).unwrap();
        assert_eq!(out.completion, vec![1.0]);
    }

    #[test]
    fn two_shared_unit_jobs() {
        let mut o = oracle(&[(1.0, 5.0, 1.0), (1.0, 5.0, 1.0)]);
        o.commit_untested(0).unwrap();
        o.commit_untested(1).unwrap();
        let set: Arc<[usize]> = Arc::from(vec![0usize, 1]);
        let mut s = Schedule::new();
        for id in 0..2 {
            s.events.push(ScheduleEvent {
                job_id: id,
                kind: EventKind::SharedSlice,
                start: 0.0,
                end: 2.0,
                share_set: Some(set.clone()),
            });
        }
        let out = outcome_from_schedule(&s, &o).unwrap();
        assert_eq!(out.completion, vec![2.0, 2.0]);
        assert_eq!(out.sum_completion, 4.0);
        assert_eq!(s.idle_time(), 0.0);
    }

    #[test]
    fn uncovered_work_is_rejected() {
        let mut o = oracle(&[(5.0, 6.0, 1.0)]);
        o.commit_untested(0).unwrap();
        let mut s = Schedule::new();
        s.push_run(0, EventKind::UntestedRun, 0.0, 4.0);
        assert!(matches!(outcome_from_schedule(&s, &o), Err(ScheduleError::Uncovered { job: 0, .. })));
    }

    #[test]
    fn overlap_is_rejected() {
        let mut o = oracle(&[(2.0, 6.0, 1.0), (2.0, 6.0, 1.0)]);
        o.commit_untested(0).unwrap();
        o.commit_untested(1).unwrap();
        let mut s = Schedule::new();
        s.push_run(0, EventKind::UntestedRun, 0.0, 2.0);
        s.push_run(1, EventKind::UntestedRun, 1.0, 2.0);
        assert!(matches!(outcome_from_schedule(&s, &o), Err(ScheduleError::Overlap { .. })));
    }

    #[test]
    fn undecided_and_wrong_kind_are_rejected() {
        let o = oracle(&[(2.0, 6.0, 1.0)]);
        let mut s = Schedule::new();
        s.push_run(0, EventKind::UntestedRun, 0.0, 2.0);
        assert_eq!(outcome_from_schedule(&s, &o), Err(ScheduleError::Undecided { job: 0 }));

        let mut o = oracle(&[(2.0, 1.0, 1.0)]);
        o.reveal(0).unwrap();
        assert_eq!(outcome_from_schedule(&s, &o), Err(ScheduleError::WrongKind { job: 0 }));
    }

    #[test]
    fn run_before_test_is_rejected() {
        let mut o = oracle(&[(3.0, 1.0, 1.0)]);
        o.reveal(0).unwrap();
        let mut s = Schedule::new();
        s.push_run(0, EventKind::TestedRun, 0.0, 1.0);
        s.push_run(0, EventKind::Test, 1.0, 1.0);
        assert_eq!(outcome_from_schedule(&s, &o), Err(ScheduleError::RunBeforeTest { job: 0 }));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in [EventKind::UntestedRun, EventKind::Test, EventKind::TestedRun, EventKind::SharedSlice] {
            assert_eq!(EventKind::from_name(k.name()), Some(k));
        }
    }
}
