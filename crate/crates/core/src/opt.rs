//! Closed-form offline optimum.
//!
//! With all processing times known the optimum tests a job iff that is
//! shorter, so every job takes `rho = min(u, t + p)`, and SPT order on those
//! runtimes minimizes the sum of completion times.

use alloc::vec::Vec;

use crate::job::{optimal_runtime, Instance};

/// Sum of completion times when jobs of the given durations run back to back
/// in SPT order: `sum_i i * d_i` with `d_1 >= d_2 >= ...`.
pub fn spt_sum_completion(durations: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = durations.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.iter().enumerate().map(|(i, d)| (i + 1) as f64 * d).sum()
}

/// Optimal sum of completion times of a fully revealed instance.
pub fn opt_sum_completion(instance: &Instance) -> f64 {
    spt_sum_completion(&instance.optimal_runtimes())
}

/// Optimal makespan: `sum_j min(u_j, t_j + p_j)`.
pub fn opt_makespan(instance: &Instance) -> f64 {
    instance.jobs.iter().map(optimal_runtime).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::GOLDEN_RATIO;
    use proptest::prelude::*;
    use std::vec::Vec;

    #[test]
    fn eq1_arithmetic() {
        assert_eq!(spt_sum_completion(&[3.0, 2.0, 1.0]), 10.0);
        assert_eq!(spt_sum_completion(&[1.0, 3.0, 2.0]), 10.0);
        let n = 7;
        assert_eq!(spt_sum_completion(&std::vec![1.0; n]), (n * (n + 1) / 2) as f64);
        assert_eq!(opt_sum_completion(&Instance::default()), 0.0);
    }

    #[test]
    fn small_upper_limit_instance_matches_closed_form() {
        for &(m, lambda, eps) in &[(2usize, 2.0, 0.1), (5, 1.5, 0.01), (40, 3.0, 1e-3)] {
            let mf = m as f64;
            let mut triples: Vec<(f64, f64, f64)> = (0..m).map(|_| (lambda, 1.0, lambda)).collect();
            triples.push((mf * mf, mf * mf / lambda + eps, 0.0));
            let inst = Instance::from_triples(triples);
            let expected = mf * mf * (lambda / 2.0 + 1.0 / lambda) + mf * 1.5 * lambda + eps;
            assert!((opt_sum_completion(&inst) - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn makespan_examples() {
        assert_eq!(opt_makespan(&Instance::from_triples([(2.0, 1.0, 0.0)])), 1.0);
        assert_eq!(opt_makespan(&Instance::from_triples([(1.0, 5.0, 0.0), (2.0, 9.0, 1.0)])), 3.0);
        let phi = GOLDEN_RATIO;
        assert_eq!(opt_makespan(&Instance::from_triples([(phi, 1.0, phi)])), phi);
        assert_eq!(opt_makespan(&Instance::default()), 0.0);
    }

    proptest! {
        #[test]
        fn permutation_invariant_and_monotone(
            mut rho in proptest::collection::vec(0.0f64..10.0, 1..12),
            bump in 0.0f64..5.0,
            idx in any::<prop::sample::Index>(),
        ) {
            let base = spt_sum_completion(&rho);
            let mut reversed = rho.clone();
            reversed.reverse();
            prop_assert!((spt_sum_completion(&reversed) - base).abs() <= 1e-9 * base.max(1.0));
            let i = idx.index(rho.len());
            rho[i] += bump;
            prop_assert!(spt_sum_completion(&rho) >= base - 1e-9 * base.max(1.0));
        }
    }
}
