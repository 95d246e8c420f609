//! Seed derivation and the generator used everywhere in the crate.
//!
//! Every random component draws from a [`GameRng`] seeded by a 64-bit value.
//! Sub-streams are derived, never shared: a parent seed and an index produce a
//! child seed through [`derive_seed`]. The rule is
//!
//! ```text
//! splitmix64(x) = standard SplitMix64 finaliser of x + 0x9E3779B97F4A7C15
//! derive_seed(parent, index) = splitmix64(parent ^ splitmix64(index))
//! ```
//!
//! A trial of a sweep uses
//! `derive_seed(derive_seed(derive_seed(master, n), c_index), trial_index)`,
//! and inside one trial the board, Waiter, Client and adjudicator use the
//! child streams 0, 1, 2 and 3 of the trial seed (see [`Stream`]). Because the
//! derivation depends only on indices, results never depend on how trials are
//! scheduled across worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate-wide pseudo-random generator.
pub type GameRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed number `index` of `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index))
}

/// Named sub-streams of a single game trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Board = 0,
    Waiter = 1,
    Client = 2,
    Adjudicator = 3,
}

impl Stream {
    pub fn seed(self, trial_seed: u64) -> u64 {
        derive_seed(trial_seed, self as u64)
    }

    pub fn rng(self, trial_seed: u64) -> GameRng {
        rng_from_seed(self.seed(trial_seed))
    }
}

pub fn rng_from_seed(seed: u64) -> GameRng {
    GameRng::seed_from_u64(seed)
}

/// Seed of one sweep point: `derive_seed(derive_seed(master, n), c_index)`.
pub fn point_seed(master: u64, n: usize, c_index: usize) -> u64 {
    derive_seed(derive_seed(master, n as u64), c_index as u64)
}

/// Seed of one trial at a sweep point.
pub fn trial_seed(master: u64, n: usize, c_index: usize, trial: usize) -> u64 {
    derive_seed(point_seed(master, n, c_index), trial as u64)
}
