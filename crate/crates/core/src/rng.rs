//! Seeding.
//!
//! Every random object in the crate is a pure function of an [`RngSeed`].
//! The generator is ChaCha8: `seed_from_u64(master)` followed by
//! `set_stream(stream)`. Per-trial seeds come from [`trial_seed`], which is
//! the `(trial + 1)`-th output of a SplitMix64 generator started at the
//! master seed, so trials can run in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identification string recorded in every exported result.
pub const RNG_ID: &str = "chacha8 (rand_chacha 0.9): seed_from_u64(master), set_stream(stream); \
                          trial seed = SplitMix64(master) output #(trial+1), stream 0";

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_2024_0001;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master: u64,
    pub stream: u64,
}

impl RngSeed {
    pub const fn new(master: u64, stream: u64) -> Self {
        Self { master, stream }
    }

    /// Seed for trial `trial` of an experiment run under `master`.
    pub fn for_trial(master: u64, trial: u64) -> Self {
        Self::new(trial_seed(master, trial), 0)
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

impl From<u64> for RngSeed {
    fn from(master: u64) -> Self {
        Self::new(master, 0)
    }
}

fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derived seed of trial `trial`; a pure function of `(master, trial)`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    splitmix64_mix(master.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}
