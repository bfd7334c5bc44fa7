//! Lower-bound instance families, the adaptive adversary and random
//! instance generators.

mod adaptive;
mod families;
mod random;
mod strawman;

pub use adaptive::AdaptiveAdversary;
pub use families::{
    grr_tight_value, lb3_sort_value, small_limit_trap_alg_value, small_limit_trap_opt_value, triangular,
    two_sets_limit_ratio, Family, FamilyError,
};
pub use random::{random_instance, unit_test_instance, Profile};
pub use strawman::small_upper_limit_policy;
