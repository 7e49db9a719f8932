//! Seed handling.
//!
//! Every random number in the crate descends from one user seed. Replica `i`
//! of an experiment seeded with `s` draws from `derive_seed(s, i)`; lattice
//! edge states are a stateless hash of `(seed, edge key)`.

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;

/// Generator used for all sequential sampling.
pub type SimRng = Pcg64Mcg;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finaliser: a bijective avalanche mix of a 64-bit word.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Split function: seed of stream `stream` under master seed `seed`.
#[inline]
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix64(mix64(seed ^ GOLDEN).wrapping_add(stream.wrapping_mul(GOLDEN)))
}

/// Fresh generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, stream))
}

/// Map a 64-bit hash to a uniform double in `[0, 1)` using the top 53 bits.
#[inline]
pub fn unit_f64(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Counter-based hash of a sequence of words under `seed`.
#[inline]
pub fn hash_words(seed: u64, words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h = mix64(seed ^ 0x5851_f42d_4c95_7f2d);
    for w in words {
        h = mix64(h ^ w.wrapping_mul(GOLDEN));
    }
    h
}
