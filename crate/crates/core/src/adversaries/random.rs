//! Seeded random instances for property suites.

use alloc::vec::Vec;

use rand::Rng;

use crate::job::{Instance, GOLDEN_RATIO};
use crate::rng::{unit, unit_open_below, Seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Profile {
    /// `u, t ~ U(0, u_max]`, `p ~ U(0, u]`.
    Uniform,
    /// Log-uniform ratios in `[1, 1000]`; processing times often at the
    /// extremes `0` and `u`.
    HeavyRatio,
    /// Three of every four jobs have `u/t` within 5% of 1, φ or 2.
    NearThreshold,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::Uniform, Profile::HeavyRatio, Profile::NearThreshold];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Uniform => "uniform",
            Profile::HeavyRatio => "heavy_ratio",
            Profile::NearThreshold => "near_threshold",
        }
    }
}

/// `0`, `u`, or uniform in `(0, u]`, one third each.
fn extreme_biased(rng: &mut impl Rng, u: f64) -> f64 {
    match rng.random_range(0..3u8) {
        0 => 0.0,
        1 => u,
        _ => u * unit_open_below(rng),
    }
}

pub fn random_instance(n: usize, u_max: f64, seed: Seed, profile: Profile) -> Instance {
    let mut rng = seed.rng();
    let triples: Vec<(f64, f64, f64)> = (0..n)
        .map(|i| {
            let u = u_max * unit_open_below(&mut rng);
            match profile {
                Profile::Uniform => {
                    let t = u_max * unit_open_below(&mut rng);
                    (u, t, u * unit_open_below(&mut rng))
                }
                Profile::HeavyRatio => {
                    let r = libm::exp(unit(&mut rng) * libm::log(1000.0));
                    (u, u / r, extreme_biased(&mut rng, u))
                }
                Profile::NearThreshold if i % 4 != 3 => {
                    let center = [1.0, GOLDEN_RATIO, 2.0][rng.random_range(0..3usize)];
                    let r = center * (1.0 + 0.1 * (unit(&mut rng) - 0.5));
                    (u, u / r, extreme_biased(&mut rng, u))
                }
                Profile::NearThreshold => {
                    let t = u_max * unit_open_below(&mut rng);
                    (u, t, extreme_biased(&mut rng, u))
                }
            }
        })
        .collect();
    Instance::from_triples(triples)
}

/// Unit testing times, `u ~ U(0, u_max]`, processing times biased to the
/// extremes.
pub fn unit_test_instance(n: usize, u_max: f64, seed: Seed) -> Instance {
    let mut rng = seed.rng();
    let triples: Vec<(f64, f64, f64)> = (0..n)
        .map(|_| {
            let u = u_max * unit_open_below(&mut rng);
            (u, 1.0, extreme_biased(&mut rng, u))
        })
        .collect();
    Instance::from_triples(triples)
}
