use proptest::prelude::*;

use testlab_core::algorithms::{
    alpha_beta_sort, force_testing, golden_round_robin, grr_closed_form, makespan_det, Algorithm,
};
use testlab_core::brute::{brute_opt_makespan, brute_opt_sum};
use testlab_core::rng::Seed;
use testlab_core::{
    approx_eq, approx_le, opt_makespan, opt_sum_completion, outcome_from_schedule, Decision, Instance, Settle,
    StaticOracle, GOLDEN_RATIO,
};

fn job() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.01f64..10.0, 0.0f64..5.0, 0.0f64..=1.0).prop_map(|(u, t, frac)| (u, t, u * frac))
}

fn instance(max_n: usize) -> impl Strategy<Value = Instance> {
    prop::collection::vec(job(), 1..=max_n).prop_map(Instance::from_triples)
}

fn unit_instance(max_n: usize) -> impl Strategy<Value = Instance> {
    prop::collection::vec((0.01f64..10.0, 0.0f64..=1.0), 1..=max_n)
        .prop_map(|v| Instance::from_triples(v.into_iter().map(|(u, f)| (u, 1.0, u * f))))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sort_respects_per_job_bounds(inst in instance(20), alpha in 1.0f64..4.0, beta in 1.0f64..4.0) {
        let mut o = StaticOracle::new(inst.clone());
        let s = alpha_beta_sort(&mut o, alpha, beta).unwrap();
        prop_assert_eq!(s.idle_time(), 0.0);
        let real = o.realization();
        for j in &inst.jobs {
            let rho = j.optimal_runtime();
            match real.decisions[j.id] {
                Some(Decision::Untested) => prop_assert!(approx_le(j.u, alpha * rho)),
                Some(Decision::Tested) => prop_assert!(approx_le(j.t + j.p, (1.0 + 1.0 / alpha) * rho)),
                None => prop_assert!(false, "job {} never scheduled", j.id),
            }
        }
    }

    #[test]
    fn sort_is_within_four(inst in instance(25)) {
        let mut o = StaticOracle::new(inst);
        let s = alpha_beta_sort(&mut o, 1.0, 1.0).unwrap();
        let out = outcome_from_schedule(&s, &o).unwrap();
        prop_assert!(approx_le(out.ratio_sum, 4.0));
    }

    #[test]
    fn grr_is_within_two_phi_and_matches_closed_form(inst in instance(25)) {
        let mut o = StaticOracle::new(inst.clone());
        let s = golden_round_robin(&mut o).unwrap();
        prop_assert!(approx_eq(s.idle_time(), 0.0));
        let out = outcome_from_schedule(&s, &o).unwrap();
        prop_assert!(approx_le(out.ratio_sum, 2.0 * GOLDEN_RATIO));
        let real = o.realization();
        let works: Vec<f64> = inst
            .jobs
            .iter()
            .map(|j| if real.decisions[j.id] == Some(Decision::Tested) { j.t + j.p } else { j.u })
            .collect();
        for (a, b) in grr_closed_form(&works).iter().zip(&out.completion) {
            prop_assert!(approx_eq(*a, *b), "{a} vs {b}");
        }
    }

    #[test]
    fn force_testing_is_within_two(inst in unit_instance(25)) {
        let mut o = StaticOracle::new(inst);
        let s = force_testing(&mut o).unwrap();
        prop_assert_eq!(s.idle_time(), 0.0);
        let out = outcome_from_schedule(&s, &o).unwrap();
        prop_assert!(approx_le(out.ratio_sum, 2.0));
    }

    #[test]
    fn makespan_det_is_within_phi(inst in instance(25)) {
        let mut o = StaticOracle::new(inst);
        let s = makespan_det(&mut o).unwrap();
        let out = outcome_from_schedule(&s, &o).unwrap();
        prop_assert!(approx_le(out.ratio_makespan, GOLDEN_RATIO));
    }

    #[test]
    fn closed_form_optima_match_brute_force(inst in instance(8)) {
        let brute = brute_opt_sum(&inst).unwrap().best_value;
        prop_assert!(approx_eq(opt_sum_completion(&inst), brute));
        let brute = brute_opt_makespan(&inst).unwrap();
        prop_assert!(approx_eq(opt_makespan(&inst), brute));
    }

    #[test]
    fn randomized_runs_are_reproducible(inst in instance(15), base in any::<u64>()) {
        for alg in [Algorithm::RandomizedSort { beta: 1.2574 }, Algorithm::MakespanRand] {
            let run = |seed| {
                let mut o = StaticOracle::new(inst.clone());
                let s = alg.run(&mut o, seed).unwrap();
                (s, o.realization().decisions)
            };
            prop_assert_eq!(run(Seed::new(base, 3)), run(Seed::new(base, 3)));
        }
    }

    #[test]
    fn deterministic_algorithms_ignore_the_seed(inst in instance(15)) {
        for alg in [Algorithm::AlphaBetaSort { alpha: 1.0, beta: 1.0 }, Algorithm::GoldenRoundRobin, Algorithm::MakespanDet] {
            let run = |seed| {
                let mut o = StaticOracle::new(inst.clone());
                alg.run(&mut o, seed).unwrap()
            };
            prop_assert_eq!(run(Seed::new(1, 0)), run(Seed::new(2, 9)));
        }
    }
}

#[test]
fn every_job_completes_once() {
    let inst = Instance::from_triples([(3.0, 1.0, 0.5), (2.0, 2.5, 2.0), (1.0, 0.0, 0.2), (4.0, 1.0, 4.0)]);
    for alg in [
        Algorithm::AlphaBetaSort { alpha: 1.0, beta: 1.0 },
        Algorithm::GoldenRoundRobin,
        Algorithm::RandomizedSort { beta: 1.2574 },
        Algorithm::MakespanDet,
        Algorithm::MakespanRand,
    ] {
        let mut o = StaticOracle::new(inst.clone());
        let s = alg.run(&mut o, Seed::new(0, 0)).unwrap();
        let done = s.completion_times(inst.len());
        assert!(done.iter().all(Option::is_some), "{}", alg.name());
        assert_eq!(o.realization().decisions.iter().filter(|d| d.is_some()).count(), inst.len());
    }
}
