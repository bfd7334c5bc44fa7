//! Seeded random streams.
//!
//! Every randomized run is driven by a ChaCha8 generator keyed by a base seed
//! and a stream index, so trial `i` of an experiment with base seed `s` uses
//! stream `i` of generator `s` independently of how many trials run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    pub base: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(base: u64, stream: u64) -> Self {
        Seed { base, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base);
        rng.set_stream(self.stream);
        rng
    }
}

impl From<u64> for Seed {
    fn from(base: u64) -> Self {
        Seed { base, stream: 0 }
    }
}

/// Uniform draw from `[0, 1)`.
pub fn unit(rng: &mut impl Rng) -> f64 {
    rng.random::<f64>()
}

/// Uniform draw from `(0, 1]`.
pub fn unit_open_below(rng: &mut impl Rng) -> f64 {
    1.0 - unit(rng)
}
