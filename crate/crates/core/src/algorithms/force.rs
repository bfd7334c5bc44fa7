//! Force Testing for unit testing times.

use alloc::vec::Vec;

use super::AlgorithmError;
use crate::job::JobView;
use crate::oracle::InstanceOracle;
use crate::schedule::{EventKind, Schedule};

/// Runs every job with `u < 2` untested in increasing `u`, then tests all
/// remaining jobs, then runs the tested jobs in SPT order. Requires `t = 1`
/// for every job.
pub fn force_testing(oracle: &mut dyn InstanceOracle) -> Result<Schedule, AlgorithmError> {
    let views = oracle.jobs().to_vec();
    if let Some(job) = views.iter().find(|j| j.t != 1.0) {
        return Err(AlgorithmError::Unsupported { job: job.id, reason: "force testing needs unit testing times" });
    }
    let (mut untested, tested): (Vec<&JobView>, Vec<&JobView>) = views.iter().partition(|j| j.u < 2.0);
    untested.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.id.cmp(&b.id)));

    let mut schedule = Schedule::new();
    let mut now = 0.0;
    for job in &untested {
        oracle.commit_untested(job.id)?;
        now = schedule.push_run(job.id, EventKind::UntestedRun, now, job.u);
    }
    let mut revealed = Vec::with_capacity(tested.len());
    for job in &tested {
        oracle.commit_test(job.id)?;
        now = schedule.push_run(job.id, EventKind::Test, now, job.t);
        revealed.push((oracle.reveal(job.id)?, job.id));
    }
    revealed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for (p, id) in revealed {
        now = schedule.push_run(id, EventKind::TestedRun, now, p);
    }
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::Instance;
    use crate::oracle::StaticOracle;
    use crate::schedule::{outcome_from_schedule, ScheduleEvent};

    #[test]
    fn single_tested_job() {
        let mut o = StaticOracle::new(Instance::from_triples([(3.0, 1.0, 1.0)]));
        let s = force_testing(&mut o).unwrap();
        assert_eq!(
            s.events,
            [
                ScheduleEvent::full_rate(0, EventKind::Test, 0.0, 1.0),
                ScheduleEvent::full_rate(0, EventKind::TestedRun, 1.0, 2.0),
            ]
        );
        let out = outcome_from_schedule(&s, &o).unwrap();
        assert_eq!((out.sum_completion, out.opt_sum, out.ratio_sum), (2.0, 2.0, 1.0));
    }

    #[test]
    fn small_bound_first_then_tests() {
        let mut o = StaticOracle::new(Instance::from_triples([(1.5, 1.0, 1.0), (3.0, 1.0, 0.0)]));
        let s = force_testing(&mut o).unwrap();
        assert_eq!(
            s.events,
            [
                ScheduleEvent::full_rate(0, EventKind::UntestedRun, 0.0, 1.5),
                ScheduleEvent::full_rate(1, EventKind::Test, 1.5, 2.5),
                ScheduleEvent::full_rate(1, EventKind::TestedRun, 2.5, 2.5),
            ]
        );
    }

    #[test]
    fn all_zero_processing_times_finish_after_all_tests() {
        let n = 6;
        let inst = Instance::from_triples((0..n).map(|_| (100.0, 1.0, 0.0)));
        let mut o = StaticOracle::new(inst);
        let out = outcome_from_schedule(&force_testing(&mut o).unwrap(), &o).unwrap();
        assert!(out.completion.iter().all(|&c| c == n as f64));
        assert_eq!(out.sum_completion, (n * n) as f64);
        assert_eq!(out.opt_sum, (n * (n + 1) / 2) as f64);
    }

    #[test]
    fn non_unit_tests_are_rejected() {
        let mut o = StaticOracle::new(Instance::from_triples([(3.0, 1.0, 1.0), (3.0, 0.5, 1.0)]));
        assert!(matches!(force_testing(&mut o), Err(AlgorithmError::Unsupported { job: 1, .. })));
    }
}
