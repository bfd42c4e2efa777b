//! Deterministic random streams keyed by `(seed, run, lane)`.
//!
//! Every `(run, lane)` pair gets its own ChaCha stream under a key derived
//! from the seed, so results do not depend on the order runs execute in.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Independent purposes within one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Lane {
    Sensor1 = 0,
    Sensor2 = 1,
    MonteCarlo = 2,
}

const LANES: u64 = 4;

pub fn stream(seed: u64, run: u64, lane: Lane) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(run.wrapping_mul(LANES).wrapping_add(lane as u64));
    rng
}

/// One seed per estimate for Monte-Carlo fusion.
///
/// Swapping the two estimates together with their seeds gives exactly the
/// same particles, hence a symmetric result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSeeds(pub [u64; 2]);

impl SampleSeeds {
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        Self([rng.next_u64(), rng.next_u64()])
    }

    pub fn swapped(self) -> Self {
        Self([self.0[1], self.0[0]])
    }

    pub fn rng(&self, estimate: usize) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0[estimate])
    }
}
