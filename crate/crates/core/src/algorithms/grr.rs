//! Golden Round Robin as ideal processor sharing.
//!
//! Round Robin with a vanishing quantum gives each of the `k` unfinished jobs
//! rate `1/k`. We simulate that limit exactly: a common virtual clock counts
//! the service every active job has received, and each phase (untested run,
//! test, tested run) ends when the clock reaches the phase's target.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use super::AlgorithmError;
use crate::job::GOLDEN_RATIO;
use crate::oracle::InstanceOracle;
use crate::schedule::{EventKind, Schedule, ScheduleEvent};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Phase {
    Untested,
    Test,
    Run,
}

#[derive(Clone, Copy, Debug)]
struct Target {
    service: f64,
    id: usize,
}

impl PartialEq for Target {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Target {}

impl PartialOrd for Target {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Target {
    fn cmp(&self, other: &Self) -> Ordering {
        self.service.total_cmp(&other.service).then(self.id.cmp(&other.id))
    }
}

/// Golden Round Robin: test iff `u >= φ t`, then share the machine equally.
pub fn golden_round_robin(oracle: &mut dyn InstanceOracle) -> Result<Schedule, AlgorithmError> {
    round_robin(oracle, GOLDEN_RATIO)
}

/// Processor sharing with test threshold `threshold`. A tested job stays in
/// the rotation after its test, continuing with its revealed processing time.
pub fn round_robin(oracle: &mut dyn InstanceOracle, threshold: f64) -> Result<Schedule, AlgorithmError> {
    let views = oracle.jobs().to_vec();
    let n = views.len();
    let mut phase = vec![Phase::Untested; n];
    let mut heap = BinaryHeap::with_capacity(n);
    // Every job starts at time zero, so all commitments happen up front.
    for job in &views {
        if job.tested_under(threshold) {
            oracle.commit_test(job.id)?;
            phase[job.id] = Phase::Test;
            heap.push(Reverse(Target { service: job.t, id: job.id }));
        } else {
            oracle.commit_untested(job.id)?;
            heap.push(Reverse(Target { service: job.u, id: job.id }));
        }
    }

    let mut active: BTreeSet<usize> = views.iter().map(|j| j.id).collect();
    let mut has_event = vec![false; n];
    let mut share: Option<Arc<[usize]>> = None;
    let mut schedule = Schedule::new();
    let mut service = 0.0f64;
    let mut now = 0.0f64;

    while let Some(&Reverse(next)) = heap.peek() {
        if next.service > service {
            let end = now + (next.service - service) * active.len() as f64;
            let set = share.get_or_insert_with(|| active.iter().copied().collect::<Vec<_>>().into()).clone();
            for &id in set.iter() {
                schedule.events.push(ScheduleEvent {
                    job_id: id,
                    kind: EventKind::SharedSlice,
                    start: now,
                    end,
                    share_set: Some(set.clone()),
                });
                has_event[id] = true;
            }
            now = end;
            service = next.service;
        }
        while let Some(&Reverse(done)) = heap.peek() {
            if done.service > service {
                break;
            }
            heap.pop();
            let id = done.id;
            if phase[id] == Phase::Test {
                let p = oracle.reveal(id)?;
                phase[id] = Phase::Run;
                heap.push(Reverse(Target { service: service + p, id }));
                continue;
            }
            active.remove(&id);
            share = None;
            if !has_event[id] {
                // zero total work: the job completes without occupying the machine
                schedule.events.push(ScheduleEvent {
                    job_id: id,
                    kind: EventKind::SharedSlice,
                    start: now,
                    end: now,
                    share_set: Some(Arc::from(vec![id])),
                });
                has_event[id] = true;
            }
        }
    }
    Ok(schedule)
}

/// Completion times of ideal processor sharing on total works `works`:
/// in ascending order of work (ties by index) the `i`-th job completes at
/// `sum_{k<i} w_k + (n - i) w_i`.
pub fn grr_closed_form(works: &[f64]) -> Vec<f64> {
    let n = works.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| works[a].total_cmp(&works[b]).then(a.cmp(&b)));
    let mut completion = vec![0.0; n];
    let mut prefix = 0.0;
    for (i, &j) in order.iter().enumerate() {
        completion[j] = prefix + (n - i) as f64 * works[j];
        prefix += works[j];
    }
    completion
}
