use alloc::vec::Vec;

use crate::algorithms::AlgorithmError;
use crate::oracle::InstanceOracle;
use crate::schedule::{EventKind, Schedule};

/// The small-upper-limit rule carried over from unit testing times: jobs with
/// `u / t < λ` run untested first, in increasing `u`; everything else then
/// runs untested in id order.
///
/// Only meaningful on the `SmallLimitTrap` family, where exactly one job has a
/// small ratio and the remaining jobs are identical; anything else is
/// rejected. The resulting ratio is unbounded in `m`.
pub fn small_upper_limit_policy(oracle: &mut dyn InstanceOracle, lambda: f64) -> Result<Schedule, AlgorithmError> {
    if !(lambda >= 1.0) {
        return Err(AlgorithmError::Parameter { name: "lambda", value: lambda });
    }
    let views = oracle.jobs().to_vec();
    let (mut small, rest): (Vec<_>, Vec<_>) = views.iter().partition(|j| j.ratio() < lambda);
    if small.len() != 1 {
        let job = small.get(1).or(views.first()).map_or(0, |j| j.id);
        return Err(AlgorithmError::Unsupported { job, reason: "expected exactly one job with u/t below lambda" });
    }
    if let Some(odd) = rest.iter().find(|j| j.u != rest[0].u || j.t != rest[0].t) {
        return Err(AlgorithmError::Unsupported { job: odd.id, reason: "remaining jobs must be identical" });
    }
    small.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.id.cmp(&b.id)));

    let mut schedule = Schedule::new();
    let mut now = 0.0;
    for job in small.iter().chain(rest.iter()) {
        oracle.commit_untested(job.id)?;
        now = schedule.push_run(job.id, EventKind::UntestedRun, now, job.u);
    }
    Ok(schedule)
}
