//! Online single-machine scheduling with testing.
//!
//! Every job has a public upper bound `u` and testing time `t`. Its actual
//! processing time `p <= u` stays hidden until the job is tested. An algorithm
//! either runs a job untested (cost `u`) or tests it first (cost `t + p`).
//!
//! The crate is `no_std` with `alloc`; IO, file formats and the CLI live in the
//! `testlab` companion crate.

#![no_std]
// `!(x >= lo)` rejects NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversaries;
pub mod algorithms;
pub mod analysis;
pub mod brute;
pub mod job;
pub mod opt;
pub mod oracle;
pub mod rng;
pub mod schedule;

pub use job::{optimal_runtime, Instance, Job, JobView, GOLDEN_RATIO};
pub use opt::{opt_makespan, opt_sum_completion};
pub use oracle::{Decision, InstanceOracle, OracleError, Realization, Settle, StaticOracle};
pub use schedule::{outcome_from_schedule, EventKind, Outcome, Schedule, ScheduleError, ScheduleEvent};

/// Absolute tolerance used by validations and assertions, scaled by the
/// magnitude of the compared quantities when they exceed one.
pub const TOL: f64 = 1e-9;

/// `a <= b` up to [`TOL`] relative to `max(1, |a|, |b|)`.
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + TOL * a.abs().max(b.abs()).max(1.0)
}

/// `a == b` up to [`TOL`] relative to `max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * a.abs().max(b.abs()).max(1.0)
}
