//! Deterministic seed derivation.
//!
//! One master seed fans out into independent streams through SplitMix64
//! finalization, the standard splittable-counter construction: every
//! (parent, tag) pair maps to a child seed through two rounds of the
//! SplitMix64 mixer, so streams for different trajectories, dimensions,
//! and models never share state. The scheme is pure arithmetic on `u64`,
//! hence identical on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Counter-based RNG used for every stochastic stream in this crate.
pub type StreamRng = ChaCha12Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer: a bijective avalanche mix on `u64`.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the child seed of `parent` for stream `tag`.
#[inline]
pub fn child_seed(parent: u64, tag: u64) -> u64 {
    mix(parent ^ mix(tag))
}

/// Hashes a string id (FNV-1a, 64 bit) into a stream tag.
#[inline]
pub fn string_tag(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Builds the RNG for a derived stream.
#[inline]
pub fn stream_rng(parent: u64, tag: u64) -> StreamRng {
    StreamRng::seed_from_u64(child_seed(parent, tag))
}
