//! The verification battery behind `testlab verify`.

use testlab_core::adversaries::{
    grr_tight_value, lb3_sort_value, random_instance, small_limit_trap_alg_value, small_limit_trap_opt_value,
    unit_test_instance, Family, Profile,
};
use testlab_core::algorithms::{
    alpha_beta_sort, force_testing, golden_round_robin, grr_closed_form, makespan_det, makespan_rand_expected_ratio,
    makespan_rand_ratio_bound,
};
use testlab_core::analysis::{contribution_audit, AuditReport};
use testlab_core::brute::{brute_opt_makespan, brute_opt_sum, brute_opt_sum_all_orders, decisions_follow_rule};
use testlab_core::rng::Seed;
use testlab_core::schedule::Schedule;
use testlab_core::{
    approx_eq, approx_le, opt_makespan, opt_sum_completion, Decision, Instance, Outcome, Settle, StaticOracle,
    GOLDEN_RATIO,
};

/// Largest instance the exhaustive oracle accepts.
pub const MAX_N: usize = 12;

/// Deliberate bugs for checking that the battery notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// The brute-force oracle sequences longest job first.
    ReversedSpt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_n: 8, trials: 1000, seed: 0, fault: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub suite: &'static str,
    pub message: String,
    pub instance: Instance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub first: Option<Counterexample>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, checks: 0, failures: 0, first: None }
    }

    fn check(&mut self, ok: bool, instance: &Instance, message: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(Counterexample { suite: self.name, message: message(), instance: instance.clone() });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn profile(i: usize) -> Profile {
    Profile::ALL[i % Profile::ALL.len()]
}

fn run_static(
    instance: &Instance,
    alg: impl FnOnce(&mut StaticOracle) -> Result<Schedule, testlab_core::algorithms::AlgorithmError>,
) -> Result<(Schedule, StaticOracle, Outcome), String> {
    let mut o = StaticOracle::new(instance.clone());
    let s = alg(&mut o).map_err(|e| e.to_string())?;
    let out = testlab_core::outcome_from_schedule(&s, &o).map_err(|e| e.to_string())?;
    Ok((s, o, out))
}

/// Brute force with the sequencing rule reversed.
fn faulty_brute(instance: &Instance) -> f64 {
    let n = instance.len();
    let mut best = f64::INFINITY;
    for mask in 0..1u32 << n {
        let mut d: Vec<f64> =
            instance.jobs.iter().enumerate().map(|(i, j)| if mask >> i & 1 == 1 { j.t + j.p } else { j.u }).collect();
        d.sort_by(|a, b| b.total_cmp(a));
        let mut now = 0.0;
        let mut total = 0.0;
        for x in d {
            now += x;
            total += now;
        }
        best = best.min(total);
    }
    best
}

fn oracle_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("oracle");
    for i in 0..cfg.trials {
        let n = 1 + i % cfg.max_n;
        let inst = random_instance(n, 10.0, Seed::new(cfg.seed, i as u64), profile(i));
        let closed = opt_sum_completion(&inst);
        let brute = match cfg.fault {
            Some(Fault::ReversedSpt) => faulty_brute(&inst),
            None => match brute_opt_sum(&inst) {
                Ok(r) => {
                    rep.check(decisions_follow_rule(&inst, &r.best_decisions), &inst, || {
                        "brute-force decisions break the t+p <= u rule".into()
                    });
                    r.best_value
                }
                Err(e) => {
                    rep.check(false, &inst, || e.to_string());
                    continue;
                }
            },
        };
        rep.check(approx_eq(brute, closed), &inst, || format!("opt_sum_completion {closed} != brute force {brute}"));
        let mk = brute_opt_makespan(&inst).unwrap_or(f64::NAN);
        rep.check(approx_eq(mk, opt_makespan(&inst)), &inst, || "opt_makespan disagrees with brute force".into());
        if n <= 5 && cfg.fault.is_none() {
            let full = brute_opt_sum_all_orders(&inst).map(|r| r.best_value).unwrap_or(f64::NAN);
            rep.check(approx_eq(full, closed), &inst, || format!("all-orders brute force {full} != {closed}"));
        }
    }
    rep
}

fn audit_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("contribution-audit");
    let mut tally = AuditReport::empty();
    let mut last = Instance::default();
    for i in 0..cfg.trials {
        let n = 1 + i % 30;
        let inst = random_instance(n, 10.0, Seed::new(cfg.seed ^ 0xa0d1, i as u64), profile(i));
        match run_static(&inst, |o| alpha_beta_sort(o, 1.0, 1.0)) {
            Ok((s, o, _)) => match contribution_audit(&s, &o, 1.0, 1.0) {
                Ok(r) => {
                    tally.merge(&r);
                    rep.check(true, &inst, String::new);
                }
                Err(e) => rep.check(false, &inst, || e.to_string()),
            },
            Err(e) => rep.check(false, &inst, || e),
        }
        last = inst;
    }
    let missing = tally.missing_cases();
    rep.check(missing.is_empty(), &last, || {
        format!("cases never exercised: {}", missing.iter().map(|c| c.name()).collect::<Vec<_>>().join(" "))
    });
    rep
}

fn processor_sharing_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("processor-sharing");
    for i in 0..cfg.trials {
        let n = 1 + i % 40;
        let inst = random_instance(n, 10.0, Seed::new(cfg.seed ^ 0x9a55, i as u64), profile(i));
        match run_static(&inst, |o| golden_round_robin(o)) {
            Ok((_, o, out)) => {
                let real = o.realization();
                let works: Vec<f64> = inst
                    .jobs
                    .iter()
                    .map(|j| match real.decisions[j.id] {
                        Some(Decision::Tested) => j.t + j.p,
                        _ => j.u,
                    })
                    .collect();
                let closed = grr_closed_form(&works);
                let ok = closed.iter().zip(&out.completion).all(|(a, b)| approx_eq(*a, *b));
                rep.check(ok, &inst, || format!("simulated {:?} != closed form {closed:?}", out.completion));
            }
            Err(e) => rep.check(false, &inst, || e),
        }
    }
    rep
}

fn ratio_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("ratio-bounds");
    for i in 0..cfg.trials {
        let n = 1 + i % 50;
        let inst = random_instance(n, 10.0, Seed::new(cfg.seed ^ 0x4a71, i as u64), profile(i));
        let checks: [(&str, f64, bool); 3] =
            [("ab-sort", 4.0, false), ("grr", 2.0 * GOLDEN_RATIO, false), ("makespan-det", GOLDEN_RATIO, true)];
        for (name, bound, makespan) in checks {
            let res = match name {
                "ab-sort" => run_static(&inst, |o| alpha_beta_sort(o, 1.0, 1.0)),
                "grr" => run_static(&inst, |o| golden_round_robin(o)),
                _ => run_static(&inst, |o| makespan_det(o)),
            };
            match res {
                Ok((_, _, out)) => {
                    let ratio = if makespan { out.ratio_makespan } else { out.ratio_sum };
                    rep.check(approx_le(ratio, bound), &inst, || format!("{name} ratio {ratio} exceeds {bound}"));
                }
                Err(e) => rep.check(false, &inst, || e),
            }
        }
        let unit = unit_test_instance(n, 5.0, Seed::new(cfg.seed ^ 0xf0ce, i as u64));
        match run_static(&unit, |o| force_testing(o)) {
            Ok((_, _, out)) => rep.check(approx_le(out.ratio_sum, 2.0), &unit, || {
                format!("force-testing ratio {} exceeds 2", out.ratio_sum)
            }),
            Err(e) => rep.check(false, &unit, || e),
        }
    }
    rep
}

fn family_suite() -> SuiteReport {
    let mut rep = SuiteReport::new("families");
    for n in [1usize, 2, 3, 10, 57, 200] {
        for eps in [0.5, 0.01, 1e-4] {
            let inst = Family::Lb3 { n, eps }.build().expect("valid family");
            match run_static(&inst, |o| alpha_beta_sort(o, 1.0, 1.0)) {
                Ok((_, _, out)) => {
                    let want = lb3_sort_value(n, eps);
                    rep.check(approx_eq(out.sum_completion, want), &inst, || {
                        format!("lb3 value {} != {want}", out.sum_completion)
                    })
                }
                Err(e) => rep.check(false, &inst, || e),
            }
        }
        let inst = Family::GrrTight { n }.build().expect("valid family");
        match run_static(&inst, |o| golden_round_robin(o)) {
            Ok((_, _, out)) => {
                let want = grr_tight_value(n);
                rep.check(approx_eq(out.sum_completion, want), &inst, || {
                    format!("grr-tight value {} != {want}", out.sum_completion)
                })
            }
            Err(e) => rep.check(false, &inst, || e),
        }
    }
    for m in [2usize, 5, 20] {
        let inst = Family::SmallLimitTrap { m, lambda: 2.0, eps: 1e-4 }.build().expect("valid family");
        let opt = opt_sum_completion(&inst);
        let want = small_limit_trap_opt_value(m, 2.0, 1e-4);
        rep.check(approx_eq(opt, want), &inst, || format!("small-limit-trap optimum {opt} != {want}"));
        match run_static(&inst, |o| testlab_core::adversaries::small_upper_limit_policy(o, 2.0)) {
            Ok((_, _, out)) => {
                let want = small_limit_trap_alg_value(m, 2.0);
                rep.check(approx_eq(out.sum_completion, want), &inst, || {
                    format!("small-limit-trap value {} != {want}", out.sum_completion)
                })
            }
            Err(e) => rep.check(false, &inst, || e),
        }
    }
    rep
}

fn makespan_rand_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut rep = SuiteReport::new("makespan-rand");
    for i in 0..cfg.trials {
        let inst = random_instance(1, 10.0, Seed::new(cfg.seed ^ 0x3a4e, i as u64), profile(i));
        let j = inst.jobs[0];
        let r = j.ratio();
        let bound = if r.is_finite() { makespan_rand_ratio_bound(r.max(1.0)) } else { 1.0 };
        for p in [0.0, j.p, j.u] {
            let e = makespan_rand_expected_ratio(j.u, j.t, p);
            rep.check(approx_le(e, bound), &inst, || format!("expected ratio {e} exceeds {bound} at p = {p}"));
        }
        if r > 1.0 && r.is_finite() {
            let lo = makespan_rand_expected_ratio(j.u, j.t, 0.0);
            let hi = makespan_rand_expected_ratio(j.u, j.t, j.u);
            rep.check(approx_eq(lo, bound) && approx_eq(hi, bound), &inst, || {
                format!("adversary responses {lo}, {hi} do not equalize at {bound}")
            });
        }
    }
    rep
}

/// Runs all six suites in a fixed order.
pub fn run_verify(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    vec![
        oracle_suite(cfg),
        audit_suite(cfg),
        processor_sharing_suite(cfg),
        ratio_suite(cfg),
        family_suite(),
        makespan_rand_suite(cfg),
    ]
}
