//! Empirical check of the pairwise contribution bounds of (α,β)-SORT.
//!
//! `c(k, j)` is the machine time spent on job `k` before `j` completes.
//! Every pair is classified by the testing status of both jobs and the
//! relations between their parameters; each class carries an exact upper
//! bound on `c(k, j)` and a bound as a multiple of `ρ_j`.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use super::bound::contribution_factor;
use crate::oracle::{Decision, Realization, Settle};
use crate::schedule::{Schedule, ScheduleError};
use crate::{approx_eq, approx_le};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContributionCase {
    /// `j` untested, `k` untested, `u_k ≤ u_j`.
    N1,
    /// `j` untested, `k` untested, `u_k > u_j`.
    N2,
    /// `j` untested, `k` tested, `βt_k ≤ u_j`, `p_k ≤ u_j`.
    N3,
    /// `j` untested, `k` tested, `βt_k ≤ u_j`, `p_k > u_j`.
    N4,
    /// `j` untested, `k` tested, `βt_k > u_j`.
    N5,
    /// `j` tested, `k` untested, `u_k ≤ βt_j`.
    T1,
    /// `j` tested, `k` untested, `βt_j < u_k ≤ p_j`.
    T2,
    /// `j` tested, `k` untested, `u_k > βt_j`, `u_k > p_j`.
    T3,
    /// `j` tested, `k` tested, `t_k ≤ t_j`, `p_k ≤ βt_j`.
    T4,
    /// `j` tested, `k` tested, `t_k ≤ t_j`, `βt_j < p_k ≤ p_j`.
    T5,
    /// `j` tested, `k` tested, `t_k ≤ t_j`, `p_k > βt_j`, `p_k > p_j`.
    T6,
    /// `j` tested, `k` tested, `t_k > t_j`, `βt_k ≤ p_j`, `p_k ≤ p_j`.
    T7,
    /// `j` tested, `k` tested, `t_k > t_j`, `βt_k ≤ p_j`, `p_k > p_j`.
    T8,
    /// `j` tested, `k` tested, `t_k > t_j`, `βt_k > p_j`.
    T9,
}

impl ContributionCase {
    pub const ALL: [ContributionCase; 14] = [
        ContributionCase::N1,
        ContributionCase::N2,
        ContributionCase::N3,
        ContributionCase::N4,
        ContributionCase::N5,
        ContributionCase::T1,
        ContributionCase::T2,
        ContributionCase::T3,
        ContributionCase::T4,
        ContributionCase::T5,
        ContributionCase::T6,
        ContributionCase::T7,
        ContributionCase::T8,
        ContributionCase::T9,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["N1", "N2", "N3", "N4", "N5", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9"][self.index()]
    }

    /// Multiple of `ρ_j` bounding the contribution in this case.
    pub fn factor(self, alpha: f64, beta: f64) -> f64 {
        use ContributionCase::*;
        match self {
            N1 => alpha,
            N3 => (1.0 + 1.0 / beta) * alpha,
            N4 => alpha / beta,
            T1 => beta,
            T2 | T6 => 1.0,
            T4 => 1.0 + beta,
            T5 => 1.0 + 1.0 / alpha,
            T7 => 1.0 + 1.0 / beta,
            T8 => 1.0 / beta,
            N2 | N5 | T3 | T9 => 0.0,
        }
    }
}

/// Parameters of one job as seen by the audit.
#[derive(Clone, Copy, Debug)]
struct Side {
    u: f64,
    t: f64,
    p: f64,
    tested: bool,
}

/// Classifies the pair and returns the case with its exact value bound.
fn classify(k: Side, j: Side, beta: f64) -> (ContributionCase, f64) {
    use ContributionCase::*;
    match (j.tested, k.tested) {
        (false, false) if k.u <= j.u => (N1, k.u),
        (false, false) => (N2, 0.0),
        (false, true) if beta * k.t > j.u => (N5, 0.0),
        (false, true) if k.p <= j.u => (N3, k.t + k.p),
        (false, true) => (N4, k.t),
        (true, false) if k.u <= beta * j.t => (T1, k.u),
        (true, false) if k.u <= j.p => (T2, k.u),
        (true, false) => (T3, 0.0),
        (true, true) if k.t <= j.t => {
            if k.p <= beta * j.t {
                (T4, k.t + k.p)
            } else if k.p <= j.p {
                (T5, k.t + k.p)
            } else {
                (T6, k.t)
            }
        }
        (true, true) if beta * k.t > j.p => (T9, 0.0),
        (true, true) if k.p <= j.p => (T7, k.t + k.p),
        (true, true) => (T8, k.t),
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AuditError {
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("job {job} was never decided")]
    Undecided { job: usize },
    #[error("contributions to job {job} sum to {sum}, completion time is {completion}")]
    Sum { job: usize, sum: f64, completion: f64 },
    #[error("c({k},{j}) = {c} exceeds {bound} in case {}", case.name())]
    CaseValue { k: usize, j: usize, case: ContributionCase, c: f64, bound: f64 },
    #[error("c({k},{j}) = {c} exceeds {bound} = factor x rho_j in case {}", case.name())]
    CaseBound { k: usize, j: usize, case: ContributionCase, c: f64, bound: f64 },
    #[error("c({k},{j}) = {c} exceeds the pairwise bound {bound}")]
    Pairwise { k: usize, j: usize, c: f64, bound: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub pairs: usize,
    pub case_counts: [usize; 14],
    /// Largest `c(k, j) / ρ_j` over pairs with `ρ_j > 0`.
    pub max_factor: f64,
}

impl AuditReport {
    pub fn merge(&mut self, other: &AuditReport) {
        self.pairs += other.pairs;
        for (a, b) in self.case_counts.iter_mut().zip(other.case_counts.iter()) {
            *a += b;
        }
        self.max_factor = self.max_factor.max(other.max_factor);
    }

    pub fn empty() -> Self {
        AuditReport { pairs: 0, case_counts: [0; 14], max_factor: 0.0 }
    }

    pub fn missing_cases(&self) -> Vec<ContributionCase> {
        ContributionCase::ALL.iter().copied().filter(|c| self.case_counts[c.index()] == 0).collect()
    }
}

/// Machine time spent on each job within `[0, until]`.
fn time_before(schedule: &Schedule, n: usize, until: f64) -> Vec<f64> {
    let mut c = vec![0.0; n];
    for e in &schedule.events {
        let end = e.end.min(until);
        if end > e.start {
            let rate = if e.duration() > 0.0 { e.work() / e.duration() } else { 1.0 };
            c[e.job_id] += (end - e.start) * rate;
        }
    }
    c
}

pub fn contribution_audit(
    schedule: &Schedule,
    oracle: &dyn Settle,
    alpha: f64,
    beta: f64,
) -> Result<AuditReport, AuditError> {
    audit_realization(schedule, &oracle.realization(), alpha, beta)
}

pub fn audit_realization(
    schedule: &Schedule,
    real: &Realization,
    alpha: f64,
    beta: f64,
) -> Result<AuditReport, AuditError> {
    let outcome = crate::schedule::outcome_from_realization(schedule, real)?;
    let jobs = &real.instance.jobs;
    let n = jobs.len();
    let mut sides = Vec::with_capacity(n);
    for (i, job) in jobs.iter().enumerate() {
        let tested = match real.decisions[i] {
            Some(Decision::Tested) => true,
            Some(Decision::Untested) => false,
            None => return Err(AuditError::Undecided { job: i }),
        };
        sides.push(Side { u: job.u, t: job.t, p: job.p, tested });
    }
    let pairwise = contribution_factor(alpha, beta);
    let mut report = AuditReport::empty();
    for j in 0..n {
        let cj = outcome.completion[j];
        let rho = jobs[j].optimal_runtime();
        let contrib = time_before(schedule, n, cj);
        let sum: f64 = contrib.iter().sum();
        if !approx_eq(sum, cj) {
            return Err(AuditError::Sum { job: j, sum, completion: cj });
        }
        for (k, &c) in contrib.iter().enumerate() {
            let (case, value) = classify(sides[k], sides[j], beta);
            report.pairs += 1;
            report.case_counts[case.index()] += 1;
            if !approx_le(c, value) {
                return Err(AuditError::CaseValue { k, j, case, c, bound: value });
            }
            let bound = case.factor(alpha, beta) * rho;
            if !approx_le(c, bound) {
                return Err(AuditError::CaseBound { k, j, case, c, bound });
            }
            if !approx_le(c, pairwise * rho) {
                return Err(AuditError::Pairwise { k, j, c, bound: pairwise * rho });
            }
            if rho > 0.0 {
                report.max_factor = report.max_factor.max(c / rho);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::Family;
    use crate::algorithms::alpha_beta_sort;
    use crate::job::Instance;
    use crate::oracle::StaticOracle;
    use crate::schedule::EventKind;

    fn audit(inst: Instance, alpha: f64, beta: f64) -> Result<AuditReport, AuditError> {
        let mut o = StaticOracle::new(inst);
        let s = alpha_beta_sort(&mut o, alpha, beta).unwrap();
        contribution_audit(&s, &o, alpha, beta)
    }

    #[test]
    fn lb3_passes_with_factor_two() {
        let r = audit(Family::Lb3 { n: 3, eps: 0.5 }.build().unwrap(), 1.0, 1.0).unwrap();
        assert_eq!(r.pairs, 9);
        assert!(r.max_factor <= 2.0 + 1e-12);
    }

    #[test]
    fn single_job_contributes_its_completion() {
        let r = audit(Instance::from_triples([(3.0, 1.0, 0.5)]), 1.0, 1.0).unwrap();
        assert_eq!(r.pairs, 1);
        assert_eq!(r.case_counts[ContributionCase::T4.index()], 1);
    }

    #[test]
    fn classify_covers_each_case() {
        let s = |u, t, p, tested| Side { u, t, p, tested };
        use ContributionCase::*;
        let j_n = s(4.0, 4.0, 0.0, false);
        assert_eq!(classify(s(3.0, 3.0, 0.0, false), j_n, 1.0).0, N1);
        assert_eq!(classify(s(5.0, 5.0, 0.0, false), j_n, 1.0).0, N2);
        assert_eq!(classify(s(9.0, 1.0, 2.0, true), j_n, 1.0).0, N3);
        assert_eq!(classify(s(9.0, 1.0, 8.0, true), j_n, 1.0).0, N4);
        assert_eq!(classify(s(9.0, 5.0, 0.0, true), j_n, 1.0).0, N5);
        let j_t = s(10.0, 2.0, 5.0, true);
        assert_eq!(classify(s(1.0, 1.0, 0.0, false), j_t, 1.0).0, T1);
        assert_eq!(classify(s(4.0, 4.0, 0.0, false), j_t, 1.0).0, T2);
        assert_eq!(classify(s(6.0, 6.0, 0.0, false), j_t, 1.0).0, T3);
        assert_eq!(classify(s(9.0, 1.0, 1.5, true), j_t, 1.0).0, T4);
        assert_eq!(classify(s(9.0, 1.0, 4.0, true), j_t, 1.0).0, T5);
        assert_eq!(classify(s(9.0, 1.0, 7.0, true), j_t, 1.0).0, T6);
        assert_eq!(classify(s(9.0, 3.0, 4.0, true), j_t, 1.0).0, T7);
        assert_eq!(classify(s(9.0, 3.0, 7.0, true), j_t, 1.0).0, T8);
        assert_eq!(classify(s(9.0, 6.0, 0.0, true), j_t, 1.0).0, T9);
    }

    #[test]
    fn detects_a_tampered_schedule() {
        let inst = Instance::from_triples([(1.0, 2.0, 1.0), (3.0, 4.0, 3.0)]);
        let mut o = StaticOracle::new(inst);
        let mut s = alpha_beta_sort(&mut o, 1.0, 1.0).unwrap();
        // swap the two untested runs
        s.events.clear();
        let end = s.push_run(1, EventKind::UntestedRun, 0.0, 3.0);
        s.push_run(0, EventKind::UntestedRun, end, 1.0);
        let err = contribution_audit(&s, &o, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, AuditError::CaseValue { k: 1, j: 0, case: ContributionCase::N2, .. }));
    }
}
