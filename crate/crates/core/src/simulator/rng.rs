//! Random streams for the simulator.
//!
//! Every replication draws from its own ChaCha8 generator seeded with
//! `SeedableRng::seed_from_u64(replication_seed(master, i))`. Uniforms are
//! built from the top 53 bits of `next_u64`, so a given seed yields the same
//! points on every platform.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `index`: the `index + 1`-th output of a SplitMix64
/// sequence started at `master`.
pub fn replication_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// Seed of a named auxiliary stream, kept apart from the replication seeds.
pub fn labelled_seed(master: u64, label: &str) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for b in label.bytes() {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    mix64(master ^ mix64(hash))
}

#[derive(Debug, Clone)]
pub struct SimRng(ChaCha8Rng);

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Geometric count on `{0, 1, ...}` with the given mean.
    pub fn geometric(&mut self, mean: f64) -> u32 {
        if mean <= 0.0 {
            return 0;
        }
        let q = mean / (1.0 + mean);
        let u = 1.0 - self.uniform();
        let k = (u.ln() / q.ln()).floor();
        if k >= f64::from(u32::MAX) {
            u32::MAX
        } else {
            k as u32
        }
    }
}
