//! Seed derivation.
//!
//! Every random stage draws from a `ChaCha8Rng` seeded with
//! `splitmix64(seed ^ fnv1a(tag))`, and per-item streams add the item index
//! through one more splitmix round. Results therefore do not depend on thread
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// One step of the SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a hash of a stage tag.
pub fn fnv1a(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Sub-seed for a named stage.
pub fn sub_seed(seed: u64, tag: &str) -> u64 {
    splitmix64(seed ^ fnv1a(tag))
}

/// Sub-seed for item `index` of a named stage.
pub fn indexed_seed(seed: u64, tag: &str, index: u64) -> u64 {
    splitmix64(sub_seed(seed, tag) ^ splitmix64(index))
}

pub fn stage_rng(seed: u64, tag: &str) -> Rng {
    Rng::seed_from_u64(sub_seed(seed, tag))
}

pub fn indexed_rng(seed: u64, tag: &str, index: u64) -> Rng {
    Rng::seed_from_u64(indexed_seed(seed, tag, index))
}
