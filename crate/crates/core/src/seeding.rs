//! Seed derivation.
//!
//! Every source of randomness in the crate flows from a single `u64` master
//! seed. Sub-seeds are derived with `derive_seed`, which mixes the master
//! seed with a purpose tag through splitmix64. The derivation is pure, so a
//! run is reproducible from its master seed alone and independent units
//! (forest trees, one-vs-rest problems, shuffles) never share an RNG stream.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer (Steele, Lea, Flood 2014).
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derives the sub-seed for stream `tag` of `master`.
///
/// `derive_seed(s, t) = splitmix64(splitmix64(s) ^ t)`; the inner mix keeps
/// small master seeds and small tags from colliding.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    splitmix64(splitmix64(master) ^ tag)
}

/// Deterministic RNG for a derived stream.
pub fn stream_rng(master: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tag))
}

/// Fixed stream tags. Kept in one place so two call sites never reuse a tag
/// by accident.
pub mod tags {
    pub const GENERATOR_LATENTS: u64 = 1;
    pub const GENERATOR_MISSING: u64 = 2;
    pub const SPLIT_SHUFFLE: u64 = 3;
    pub const FOLD_SHUFFLE: u64 = 4;
    pub const CURVE_SHUFFLE: u64 = 5;
    pub const FOREST_TREE_BASE: u64 = 0x1000;
    pub const SVM_CLASS_BASE: u64 = 0x2000;
}
