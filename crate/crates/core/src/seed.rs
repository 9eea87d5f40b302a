//! Counter-based sub-seeding.
//!
//! Every random stream is keyed by the master seed plus the coordinates of
//! the work item that consumes it, so results do not depend on how the work
//! is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Folds the coordinates into one 64-bit key: `h ← splitmix64(h ⊕ w)` per word,
/// starting from `splitmix64(master)`.
pub fn mix(master: u64, words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(master), |h, &w| splitmix64(h ^ w))
}

/// Domain tags keep noise and phase streams disjoint.
pub(crate) const TAG_NOISE: u64 = 0x6e6f_6973_65;
pub(crate) const TAG_PHASE: u64 = 0x7068_6173_65;

/// Stream for noise block `block` of symbol pair `(k1, k2)` in CPA slot `slot`
/// under phase draw `draw`.
pub fn noise_rng(master: u64, k1: usize, k2: usize, block: usize, slot: usize, draw: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(
        master,
        &[TAG_NOISE, k1 as u64, k2 as u64, block as u64, slot as u64, draw as u64],
    ))
}

/// Stream for the phase pair of draw `draw`.
pub fn phase_rng(master: u64, draw: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(master, &[TAG_PHASE, draw as u64]))
}
