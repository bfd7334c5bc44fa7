use alloc::vec::Vec;

use thiserror::Error;

use crate::job::{Instance, GOLDEN_RATIO};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("{family}: parameter {name} = {value} is out of range")]
    Parameter { family: &'static str, name: &'static str, value: f64 },
}

/// Every static instance family, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `n` jobs `(u, t, p) = (1, 1 - eps, 1)`: (1,1)-SORT tends to ratio 3.
    Lb3 { n: usize, eps: f64 },
    /// One job `(2, 1, 0)`: ratio 2 for any α > 2.
    LbHighAlpha,
    /// `n` jobs `(2, 1, 2)`: for α <= 2 and β < 2 every test precedes every
    /// run, and the ratio tends to 2.
    LbHighBeta { n: usize },
    /// `n` jobs `(β, 1 - eps, β)` plus `m` jobs `(M, 1 + eps, 0)`.
    LbTwoSets { n: usize, m: usize, beta: f64, eps: f64, big_m: Option<f64> },
    /// `m` jobs `(λ, 1, λ)` plus one job `(m^2, m^2/λ + eps, 0)`.
    SmallLimitTrap { m: usize, lambda: f64, eps: f64 },
    /// `n` jobs `(1, 1/φ, 1)`: Golden Round Robin tends to ratio 2φ.
    GrrTight { n: usize },
    /// `n` jobs `(U, 1, 0)` with a large `U`: Force Testing tends to ratio 2.
    ForceTestTight { n: usize, big_u: Option<f64> },
    /// One job `(φ, 1, φ)`, the response that punishes a tester.
    MakespanDetLb,
    /// One job `(2, 1, p)` with `p = 2` if `high`, else `p = 0`.
    MakespanRandLb { high: bool },
}

impl Family {
    pub const NAMES: [&'static str; 9] = [
        "lb3",
        "lb-high-alpha",
        "lb-high-beta",
        "lb-two-sets",
        "small-limit-trap",
        "grr-tight",
        "force-test-tight",
        "makespan-det-lb",
        "makespan-rand-lb",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Lb3 { .. } => "lb3",
            Family::LbHighAlpha => "lb-high-alpha",
            Family::LbHighBeta { .. } => "lb-high-beta",
            Family::LbTwoSets { .. } => "lb-two-sets",
            Family::SmallLimitTrap { .. } => "small-limit-trap",
            Family::GrrTight { .. } => "grr-tight",
            Family::ForceTestTight { .. } => "force-test-tight",
            Family::MakespanDetLb => "makespan-det-lb",
            Family::MakespanRandLb { .. } => "makespan-rand-lb",
        }
    }

    /// Materializes the instance.
    pub fn build(&self) -> Result<Instance, FamilyError> {
        let fam = self.name();
        let err = |name: &'static str, value: f64| FamilyError::Parameter { family: fam, name, value };
        let size = |name: &'static str, v: usize| if v >= 1 { Ok(()) } else { Err(err(name, v as f64)) };
        let eps_in_unit = |eps: f64| {
            if eps > 0.0 && eps < 1.0 {
                Ok(())
            } else {
                Err(err("eps", eps))
            }
        };

        let triples: Vec<(f64, f64, f64)> = match *self {
            Family::Lb3 { n, eps } => {
                size("n", n)?;
                eps_in_unit(eps)?;
                (0..n).map(|_| (1.0, 1.0 - eps, 1.0)).collect()
            }
            Family::LbHighAlpha => [(2.0, 1.0, 0.0)].into(),
            Family::LbHighBeta { n } => {
                size("n", n)?;
                (0..n).map(|_| (2.0, 1.0, 2.0)).collect()
            }
            Family::LbTwoSets { n, m, beta, eps, big_m } => {
                size("n", n)?;
                size("m", m)?;
                eps_in_unit(eps)?;
                if !(beta >= 1.0 && beta.is_finite()) {
                    return Err(err("beta", beta));
                }
                let big = big_m.unwrap_or(10.0 * beta * n as f64 * (1.0 + eps));
                if !(big >= beta * (1.0 + eps) && big.is_finite()) {
                    return Err(err("M", big));
                }
                let mut v: Vec<_> = (0..n).map(|_| (beta, 1.0 - eps, beta)).collect();
                v.extend((0..m).map(|_| (big, 1.0 + eps, 0.0)));
                v
            }
            Family::SmallLimitTrap { m, lambda, eps } => {
                size("m", m)?;
                if !(eps > 0.0 && eps.is_finite()) {
                    return Err(err("eps", eps));
                }
                if !(lambda >= 1.0 && lambda.is_finite()) {
                    return Err(err("lambda", lambda));
                }
                let mf = m as f64;
                let mut v: Vec<_> = (0..m).map(|_| (lambda, 1.0, lambda)).collect();
                v.push((mf * mf, mf * mf / lambda + eps, 0.0));
                v
            }
            Family::GrrTight { n } => {
                size("n", n)?;
                (0..n).map(|_| (1.0, 1.0 / GOLDEN_RATIO, 1.0)).collect()
            }
            Family::ForceTestTight { n, big_u } => {
                size("n", n)?;
                let big = big_u.unwrap_or(10.0 * n as f64);
                if !(big >= 2.0 && big.is_finite()) {
                    return Err(err("U", big));
                }
                (0..n).map(|_| (big, 1.0, 0.0)).collect()
            }
            Family::MakespanDetLb => [(GOLDEN_RATIO, 1.0, GOLDEN_RATIO)].into(),
            Family::MakespanRandLb { high } => [(2.0, 1.0, if high { 2.0 } else { 0.0 })].into(),
        };
        Ok(Instance::from_triples(triples))
    }
}

/// `n (n + 1) / 2`.
pub fn triangular(n: usize) -> f64 {
    let n = n as f64;
    n * (n + 1.0) / 2.0
}

/// (1,1)-SORT on `Lb3 { n, eps }`: `n^2 (1 - eps) + n^2/2 + n/2`.
pub fn lb3_sort_value(n: usize, eps: f64) -> f64 {
    let nf = n as f64;
    nf * nf * (1.0 - eps) + triangular(n)
}

/// Golden Round Robin on `GrrTight { n }`: `n^2 φ`.
pub fn grr_tight_value(n: usize) -> f64 {
    let nf = n as f64;
    nf * nf * GOLDEN_RATIO
}

/// Limit of ALG/OPT on `LbTwoSets` with `m = n`: `(3β + 5) / (β + 3)`.
pub fn two_sets_limit_ratio(beta: f64) -> f64 {
    (3.0 * beta + 5.0) / (beta + 3.0)
}

/// The small-upper-limit policy on `SmallLimitTrap`: `m^3 + m^2 (λ/2 + 1) + m λ/2`.
pub fn small_limit_trap_alg_value(m: usize, lambda: f64) -> f64 {
    let mf = m as f64;
    mf * mf * mf + mf * mf * (lambda / 2.0 + 1.0) + mf * lambda / 2.0
}

/// Optimum on `SmallLimitTrap`: `m^2 (λ/2 + 1/λ) + 3 m λ / 2 + eps`.
pub fn small_limit_trap_opt_value(m: usize, lambda: f64, eps: f64) -> f64 {
    let mf = m as f64;
    mf * mf * (lambda / 2.0 + 1.0 / lambda) + 1.5 * mf * lambda + eps
}
