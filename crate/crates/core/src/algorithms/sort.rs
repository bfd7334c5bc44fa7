//! (α,β)-SORT and Randomized-SORT.
//!
//! Both decide up front which jobs to test and then repeatedly attend to the
//! job with the smallest scaling time σ: `u` for untested jobs, `β t` for jobs
//! awaiting their test and the revealed `p` for tested jobs.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use super::{check_at_least_one, AlgorithmError};
use crate::analysis::minmax::phat;
use crate::oracle::InstanceOracle;
use crate::rng::{unit, Seed};
use crate::schedule::{EventKind, Schedule};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Stage {
    Untested,
    AwaitingTest,
    Tested(f64),
}

/// Heap key: scaling time, ties by ascending id.
#[derive(Clone, Copy, Debug)]
struct Key {
    sigma: f64,
    id: usize,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sigma.total_cmp(&other.sigma).then(self.id.cmp(&other.id))
    }
}

/// Runs (α,β)-SORT: job `j` is tested iff `u_j >= α t_j`.
pub fn alpha_beta_sort(oracle: &mut dyn InstanceOracle, alpha: f64, beta: f64) -> Result<Schedule, AlgorithmError> {
    check_at_least_one("alpha", alpha)?;
    check_at_least_one("beta", beta)?;
    let tested: Vec<bool> = oracle.jobs().iter().map(|j| j.tested_under(alpha)).collect();
    sort_by_scaling_time(oracle, beta, &tested)
}

/// Runs Randomized-SORT: job `j` joins the test set with probability
/// `p_fn(u_j / t_j)`, one uniform draw per job in ascending id order.
pub fn randomized_sort(
    oracle: &mut dyn InstanceOracle,
    beta: f64,
    p_fn: &dyn Fn(f64) -> f64,
    seed: Seed,
) -> Result<Schedule, AlgorithmError> {
    check_at_least_one("beta", beta)?;
    let mut rng = seed.rng();
    let mut tested = Vec::with_capacity(oracle.jobs().len());
    for job in oracle.jobs() {
        let prob = p_fn(job.ratio());
        if !(0.0..=1.0).contains(&prob) {
            return Err(AlgorithmError::Probability { job: job.id, value: prob });
        }
        tested.push(unit(&mut rng) < prob);
    }
    sort_by_scaling_time(oracle, beta, &tested)
}

/// The capped intersection probability used with Randomized-SORT. Ratios
/// below one are never worth a test.
pub fn standard_test_probability(beta: f64) -> impl Fn(f64) -> f64 {
    move |r: f64| {
        if r < 1.0 {
            0.0
        } else if r.is_infinite() {
            1.0
        } else {
            phat(r, beta).unwrap_or(f64::NAN)
        }
    }
}

fn sort_by_scaling_time(
    oracle: &mut dyn InstanceOracle,
    beta: f64,
    tested: &[bool],
) -> Result<Schedule, AlgorithmError> {
    let views = oracle.jobs().to_vec();
    let mut stage: Vec<Stage> = Vec::with_capacity(views.len());
    let mut heap = BinaryHeap::with_capacity(views.len());
    for (job, &test) in views.iter().zip(tested) {
        let (s, sigma) = if test { (Stage::AwaitingTest, beta * job.t) } else { (Stage::Untested, job.u) };
        stage.push(s);
        heap.push(Reverse(Key { sigma, id: job.id }));
    }

    let mut schedule = Schedule::new();
    let mut now = 0.0;
    while let Some(Reverse(Key { id, .. })) = heap.pop() {
        let job = views[id];
        match stage[id] {
            Stage::Untested => {
                oracle.commit_untested(id)?;
                now = schedule.push_run(id, EventKind::UntestedRun, now, job.u);
            }
            Stage::AwaitingTest => {
                oracle.commit_test(id)?;
                now = schedule.push_run(id, EventKind::Test, now, job.t);
                let p = oracle.reveal(id)?;
                stage[id] = Stage::Tested(p);
                heap.push(Reverse(Key { sigma: p, id }));
            }
            Stage::Tested(p) => {
                now = schedule.push_run(id, EventKind::TestedRun, now, p);
            }
        }
    }
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::Instance;
    use crate::oracle::{Decision, StaticOracle};
    use crate::schedule::outcome_from_schedule;

    fn run(triples: &[(f64, f64, f64)], alpha: f64, beta: f64) -> (Schedule, StaticOracle) {
        let mut o = StaticOracle::new(Instance::from_triples(triples.iter().copied()));
        let s = alpha_beta_sort(&mut o, alpha, beta).unwrap();
        (s, o)
    }

    #[test]
    fn two_job_lower_bound_instance() {
        let (s, o) = run(&[(1.0, 0.5, 1.0), (1.0, 0.5, 1.0)], 1.0, 1.0);
        let kinds: Vec<_> = s.events.iter().map(|e| (e.job_id, e.kind)).collect();
        assert_eq!(
            kinds,
            [(0, EventKind::Test), (1, EventKind::Test), (0, EventKind::TestedRun), (1, EventKind::TestedRun)]
        );
        let out = outcome_from_schedule(&s, &o).unwrap();
        // n^2 (1 - eps) + n^2 / 2 + n / 2 at n = 2, eps = 0.5
        assert_eq!(out.sum_completion, 5.0);
    }

    #[test]
    fn single_tested_job() {
        let (s, o) = run(&[(2.0, 1.0, 0.0)], 1.0, 1.0);
        let out = outcome_from_schedule(&s, &o).unwrap();
        assert_eq!(out.completion, [1.0]);
        assert_eq!(out.ratio_sum, 1.0);
    }

    #[test]
    fn small_ratio_runs_untested() {
        let (s, o) = run(&[(1.5, 1.0, 0.3)], 2.0, 1.0);
        assert_eq!(o.decision(0), Some(Decision::Untested));
        assert_eq!(outcome_from_schedule(&s, &o).unwrap().completion, [1.5]);
    }

    #[test]
    fn ties_break_by_id() {
        // equal sigma: pending test of job 1 (beta t = 1) vs untested job 0 (u = 1)
        let (s, _) = run(&[(1.0, 2.0, 0.5), (3.0, 1.0, 1.0)], 1.0, 1.0);
        assert_eq!(s.events[0].job_id, 0);
        assert_eq!(s.events[1].kind, EventKind::Test);
    }

    #[test]
    fn parameters_below_one_are_rejected() {
        let mut o = StaticOracle::new(Instance::from_triples([(1.0, 1.0, 1.0)]));
        assert!(matches!(alpha_beta_sort(&mut o, 0.5, 1.0), Err(AlgorithmError::Parameter { name: "alpha", .. })));
        assert!(alpha_beta_sort(&mut o, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn degenerate_probabilities_match_deterministic_sort() {
        let triples = [(3.0, 1.0, 0.5), (2.0, 1.5, 2.0), (5.0, 0.5, 4.0), (1.2, 1.0, 0.0)];
        let inst = Instance::from_triples(triples);
        let never = |_: f64| 0.0;
        let always = |_: f64| 1.0;
        let mut a = StaticOracle::new(inst.clone());
        let mut b = StaticOracle::new(inst.clone());
        assert_eq!(
            randomized_sort(&mut a, 1.0, &never, Seed::from(1)).unwrap(),
            alpha_beta_sort(&mut b, f64::INFINITY, 1.0).unwrap()
        );
        let mut a = StaticOracle::new(inst.clone());
        let mut b = StaticOracle::new(inst);
        assert_eq!(
            randomized_sort(&mut a, 1.0, &always, Seed::from(1)).unwrap(),
            alpha_beta_sort(&mut b, 1.0, 1.0).unwrap()
        );
    }

    #[test]
    fn seeded_partition_is_reproducible() {
        let inst = Instance::from_triples([(3.0, 1.0, 0.5), (3.0, 1.0, 2.5)]);
        let half = |_: f64| 0.5;
        let partition = || {
            let mut o = StaticOracle::new(inst.clone());
            randomized_sort(&mut o, 1.0, &half, Seed::new(42, 3)).unwrap();
            (o.decision(0), o.decision(1))
        };
        let first = partition();
        for _ in 0..5 {
            assert_eq!(partition(), first);
        }
    }

    #[test]
    fn out_of_range_probability_is_rejected() {
        let mut o = StaticOracle::new(Instance::from_triples([(3.0, 1.0, 0.5)]));
        let bad = |_: f64| 1.5;
        assert!(matches!(
            randomized_sort(&mut o, 1.0, &bad, Seed::from(0)),
            Err(AlgorithmError::Probability { job: 0, .. })
        ));
    }
}
