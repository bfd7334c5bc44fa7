//! Exhaustive ground truth for small instances.

use alloc::vec::Vec;

use thiserror::Error;

use crate::job::Instance;

pub const MAX_SUM_JOBS: usize = 12;
pub const MAX_ORDER_JOBS: usize = 7;
pub const MAX_MAKESPAN_JOBS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum BruteError {
    #[error("{n} jobs exceed the enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceResult {
    pub best_value: f64,
    /// `true` where the job is tested.
    pub best_decisions: Vec<bool>,
    /// Job ids in execution order.
    pub best_order: Vec<usize>,
}

fn durations(instance: &Instance, mask: u32) -> Vec<f64> {
    instance.jobs.iter().enumerate().map(|(i, j)| if mask >> i & 1 == 1 { j.t + j.p } else { j.u }).collect()
}

fn decisions(n: usize, mask: u32) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Sum of completion times of running `order` back to back.
fn sequence_value(d: &[f64], order: &[usize]) -> f64 {
    let mut now = 0.0;
    let mut total = 0.0;
    for &i in order {
        now += d[i];
        total += now;
    }
    total
}

fn spt_order(d: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    order
}

fn check(n: usize, max: usize) -> Result<(), BruteError> {
    if n > max {
        Err(BruteError::TooLarge { n, max })
    } else {
        Ok(())
    }
}

/// Enumerates every test-decision vector and sequences each in SPT order.
/// Ties in value keep the smaller mask, so untested wins when both choices
/// are equally good.
pub fn brute_opt_sum(instance: &Instance) -> Result<BruteForceResult, BruteError> {
    let n = instance.len();
    check(n, MAX_SUM_JOBS)?;
    let mut best = BruteForceResult { best_value: f64::INFINITY, best_decisions: Vec::new(), best_order: Vec::new() };
    let mut best_mask = 0;
    for mask in 0..1u32 << n {
        let d = durations(instance, mask);
        let order = spt_order(&d);
        let v = sequence_value(&d, &order);
        if v < best.best_value {
            best.best_value = v;
            best.best_order = order;
            best_mask = mask;
        }
    }
    best.best_decisions = decisions(n, best_mask);
    Ok(best)
}

/// Like [`brute_opt_sum`] but also enumerates all `n!` orders instead of
/// relying on SPT.
pub fn brute_opt_sum_all_orders(instance: &Instance) -> Result<BruteForceResult, BruteError> {
    let n = instance.len();
    check(n, MAX_ORDER_JOBS)?;
    let mut best = BruteForceResult { best_value: f64::INFINITY, best_decisions: Vec::new(), best_order: Vec::new() };
    let mut best_mask = 0;
    for mask in 0..1u32 << n {
        let d = durations(instance, mask);
        let mut order: Vec<usize> = (0..n).collect();
        loop {
            let v = sequence_value(&d, &order);
            if v < best.best_value {
                best.best_value = v;
                best.best_order = order.clone();
                best_mask = mask;
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
    }
    best.best_decisions = decisions(n, best_mask);
    Ok(best)
}

/// Lexicographic successor; `false` after the last permutation.
fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("successor exists");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Minimum makespan over all test-decision vectors.
pub fn brute_opt_makespan(instance: &Instance) -> Result<f64, BruteError> {
    let n = instance.len();
    check(n, MAX_MAKESPAN_JOBS)?;
    let mut best = if n == 0 { 0.0 } else { f64::INFINITY };
    for mask in 0..1u32 << n {
        let v: f64 = durations(instance, mask).iter().sum();
        best = best.min(v);
    }
    Ok(best)
}

/// Whether `decisions` agrees with the rule "test iff `t + p ≤ u`" on every
/// job where the two choices differ in cost.
pub fn decisions_follow_rule(instance: &Instance, decisions: &[bool]) -> bool {
    instance.jobs.len() == decisions.len()
        && instance.jobs.iter().zip(decisions).all(|(j, &tested)| {
            let tested_cost = j.t + j.p;
            tested_cost == j.u || tested == (tested_cost < j.u)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::{random_instance, Profile};
    use crate::opt::{opt_makespan, opt_sum_completion};
    use crate::rng::Seed;
    use alloc::vec;

    #[test]
    fn single_jobs() {
        let r = brute_opt_sum(&Instance::from_triples([(2.0, 1.0, 0.0)])).unwrap();
        assert_eq!((r.best_value, r.best_decisions.clone()), (1.0, vec![true]));
        let r = brute_opt_sum(&Instance::from_triples([(1.0, 1.0, 1.0)])).unwrap();
        assert_eq!((r.best_value, r.best_decisions.clone()), (1.0, vec![false]));
    }

    #[test]
    fn makespan_examples() {
        let inst = Instance::from_triples([(2.0, 1.0, 0.0), (1.0, 1.0, 1.0)]);
        assert_eq!(brute_opt_makespan(&inst).unwrap(), 2.0);
        assert_eq!(brute_opt_makespan(&Instance::default()).unwrap(), 0.0);
        let ones = Instance::from_triples(vec![(1.0, 1.0, 1.0); 7]);
        assert_eq!(brute_opt_makespan(&ones).unwrap(), 7.0);
    }

    #[test]
    fn size_guards() {
        let big = Instance::from_triples(vec![(1.0, 1.0, 1.0); 13]);
        assert_eq!(brute_opt_sum(&big), Err(BruteError::TooLarge { n: 13, max: 12 }));
        let big = Instance::from_triples(vec![(1.0, 1.0, 1.0); 21]);
        assert!(brute_opt_makespan(&big).is_err());
    }

    #[test]
    fn permutations_are_complete() {
        let mut a = [0usize, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut a) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(a, [3, 2, 1, 0]);
    }

    #[test]
    fn agrees_with_closed_form() {
        for i in 0..200u64 {
            let n = 1 + (i % 8) as usize;
            let inst = random_instance(n, 5.0, Seed::new(i, 3), Profile::ALL[(i % 3) as usize]);
            let r = brute_opt_sum(&inst).unwrap();
            assert!(crate::approx_eq(r.best_value, opt_sum_completion(&inst)));
            assert!(decisions_follow_rule(&inst, &r.best_decisions));
            assert!(crate::approx_eq(brute_opt_makespan(&inst).unwrap(), opt_makespan(&inst)));
            if n <= 5 {
                let full = brute_opt_sum_all_orders(&inst).unwrap();
                assert!(crate::approx_eq(full.best_value, r.best_value));
            }
        }
    }
}
