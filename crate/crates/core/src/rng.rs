//! Reproducible random streams.
//!
//! A 64-bit master seed is expanded with SplitMix64 into one ChaCha8 key per
//! sub-stream (one per sweep point, say). Within a key, the ChaCha stream id
//! selects a block of trials, so block `b` draws the same numbers no matter
//! which worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One step of SplitMix64.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamSeed(pub u64);

impl StreamSeed {
    /// Seed of an independent child, e.g. one point of a parameter sweep.
    pub fn child(self, index: u64) -> StreamSeed {
        StreamSeed(splitmix64(self.0 ^ splitmix64(index.wrapping_add(1))))
    }

    /// Generator for trial block `block`.
    pub fn block(self, block: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(block);
        rng
    }
}
