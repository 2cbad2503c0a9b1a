//! Addressable random streams.
//!
//! An [`RngStream`] is a ChaCha8 generator keyed by `(seed, stream_id)`.
//! Children are derived from the key alone, never from consumed state, so
//! any replication or observation can be regenerated in isolation and in
//! any order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Independent substream number `index` of this stream.
    pub fn child(&self, index: u64) -> RngStream {
        RngStream::new(mix(self.seed, self.stream_id), index)
    }

    /// Substream addressed by a path of indices, e.g. `[cell, replication]`.
    pub fn descend(&self, path: &[u64]) -> RngStream {
        path.iter().fold(self.clone(), |s, &i| s.child(i))
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive combination of two words into a well-mixed key.
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(a) ^ b.rotate_left(17) ^ GOLDEN)
}

/// Stable 64-bit key for a sequence of words.
pub fn mix_all(words: &[u64]) -> u64 {
    words.iter().fold(0x5eed_u64, |acc, &w| mix(acc, w))
}
