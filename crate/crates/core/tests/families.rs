use testlab_core::adversaries::{
    grr_tight_value, lb3_sort_value, small_limit_trap_alg_value, small_limit_trap_opt_value, small_upper_limit_policy,
    two_sets_limit_ratio, AdaptiveAdversary, Family,
};
use testlab_core::algorithms::{alpha_beta_sort, force_testing, golden_round_robin, makespan_det, Algorithm};
use testlab_core::analysis::{monte_carlo, worst_ratio};
use testlab_core::rng::Seed;
use testlab_core::{approx_eq, outcome_from_schedule, Outcome, Settle, StaticOracle, GOLDEN_RATIO};

fn run(family: Family, alg: impl FnOnce(&mut StaticOracle) -> Outcome) -> Outcome {
    let mut o = StaticOracle::new(family.build().unwrap());
    alg(&mut o)
}

fn outcome(o: &StaticOracle, s: &testlab_core::Schedule) -> Outcome {
    outcome_from_schedule(s, o).unwrap()
}

#[test]
fn lb3_matches_its_closed_form() {
    for (n, eps) in [(1, 0.5), (10, 0.01), (100, 0.01), (300, 1e-4)] {
        let out = run(Family::Lb3 { n, eps }, |o| {
            let s = alpha_beta_sort(o, 1.0, 1.0).unwrap();
            outcome(o, &s)
        });
        assert!((out.sum_completion - lb3_sort_value(n, eps)).abs() <= 1e-9 * out.sum_completion);
    }
    let out = run(Family::Lb3 { n: 100, eps: 0.01 }, |o| {
        let s = alpha_beta_sort(o, 1.0, 1.0).unwrap();
        outcome(o, &s)
    });
    assert!((out.ratio_sum - 2.960_396_039_6).abs() < 1e-9);
}

#[test]
fn grr_tight_matches_its_closed_form() {
    for n in [1, 2, 50, 500] {
        let out = run(Family::GrrTight { n }, |o| {
            let s = golden_round_robin(o).unwrap();
            outcome(o, &s)
        });
        assert!((out.sum_completion - grr_tight_value(n)).abs() <= 1e-9 * out.sum_completion);
    }
}

#[test]
fn high_parameter_families_hit_ratio_two() {
    let out = run(Family::LbHighAlpha, |o| {
        let s = alpha_beta_sort(o, 3.0, 1.0).unwrap();
        outcome(o, &s)
    });
    assert!(approx_eq(out.ratio_sum, 2.0));
    for (alpha, beta) in [(1.0, 1.0), (2.0, 1.9)] {
        let out = run(Family::LbHighBeta { n: 2000 }, |o| {
            let s = alpha_beta_sort(o, alpha, beta).unwrap();
            outcome(o, &s)
        });
        assert!((out.ratio_sum - 2.0).abs() < 1e-3, "{}", out.ratio_sum);
    }
    // once β t >= p a job runs right after its test
    let out = run(Family::LbHighBeta { n: 2000 }, |o| {
        let s = alpha_beta_sort(o, 1.0, 3.0).unwrap();
        outcome(o, &s)
    });
    assert!((out.ratio_sum - 1.5).abs() < 1e-3, "{}", out.ratio_sum);
}

#[test]
fn force_testing_tight_family_approaches_two() {
    let out = run(Family::ForceTestTight { n: 1000, big_u: None }, |o| {
        let s = force_testing(o).unwrap();
        outcome(o, &s)
    });
    assert!(out.ratio_sum <= 2.0 + 1e-9 && out.ratio_sum > 1.99, "{}", out.ratio_sum);
}

#[test]
fn makespan_det_lower_bound_is_phi() {
    let out = run(Family::MakespanDetLb, |o| {
        let s = makespan_det(o).unwrap();
        outcome(o, &s)
    });
    assert!(approx_eq(out.ratio_makespan, GOLDEN_RATIO));
}

#[test]
fn two_sets_family_tends_to_its_limit() {
    let beta = 1.2574;
    let limit = two_sets_limit_ratio(beta);
    let mut prev = 0.0;
    for n in [50, 200, 800] {
        let out = run(Family::LbTwoSets { n, m: n, beta, eps: 1e-6, big_m: None }, |o| {
            let s = alpha_beta_sort(o, 1.0, beta).unwrap();
            outcome(o, &s)
        });
        assert!(out.ratio_sum > prev && out.ratio_sum <= limit);
        prev = out.ratio_sum;
    }
    assert!(limit - prev < 2e-3, "{prev} vs {limit}");

    let fam = Family::LbTwoSets { n: 200, m: 200, beta, eps: 1e-6, big_m: None };
    let s =
        monte_carlo(&Algorithm::RandomizedSort { beta }, |_| StaticOracle::new(fam.build().unwrap()), 200, 3).unwrap();
    assert!(s.mean <= worst_ratio(beta).ratio);
}

#[test]
fn small_limit_straw_man_matches_formula() {
    for m in [10, 100] {
        let mut o = StaticOracle::new(Family::SmallLimitTrap { m, lambda: 2.0, eps: 1e-4 }.build().unwrap());
        let s = small_upper_limit_policy(&mut o, 2.0).unwrap();
        let out = outcome(&o, &s);
        let want = small_limit_trap_alg_value(m, 2.0) / small_limit_trap_opt_value(m, 2.0, 1e-4);
        assert!((out.ratio_sum - want).abs() <= 1e-9 * want, "{} vs {want}", out.ratio_sum);
    }
}

#[test]
fn adaptive_adversary_is_deterministic_and_complete() {
    let run = || {
        let mut adv = AdaptiveAdversary::new(50, 0.6, 1.61).unwrap();
        let s = Algorithm::AlphaBetaSort { alpha: 1.0, beta: 1.0 }.run(&mut adv, Seed::new(0, 0)).unwrap();
        let real = adv.realization();
        (s, real)
    };
    let (s1, r1) = run();
    let (s2, r2) = run();
    assert_eq!(s1, s2);
    assert_eq!(r1, r2);
    assert!(r1.decisions.iter().all(Option::is_some));
    assert!(r1.instance.jobs.iter().all(|j| j.is_valid()));
}
