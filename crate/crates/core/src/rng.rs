//! Deterministic seed derivation.
//!
//! Every stochastic ingredient (radiation-source layout, priority draws,
//! per-slot baseline randomness, spectral peaks) gets its own stream derived
//! from the scenario seed, so adding sources or slots never perturbs the other
//! draws.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer; decorrelates nearby seeds.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derives an independent stream seed from a base seed and a stream tag.
pub fn mix_seed(base: u64, tag: u64) -> u64 {
    splitmix64(base ^ splitmix64(tag))
}

/// Seeded ChaCha stream; stable across platforms and releases.
pub fn stream(base: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(base, tag))
}

/// Stream tags; arbitrary distinct constants.
pub mod tags {
    pub const SOURCES: u64 = 0x01;
    pub const WEIGHTS: u64 = 0x02;
    pub const SPECTRAL: u64 = 0x03;
    pub const BASELINE_SLOT: u64 = 0x04;
    pub const SWEEP: u64 = 0x05;
}
