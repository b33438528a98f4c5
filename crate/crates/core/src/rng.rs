//! Portable random stream used by the explorer and the randomized checks.
//!
//! The generator is ChaCha8 keyed by the 64-bit seed (little-endian in the
//! first eight key bytes, remaining bytes zero) with the stream id set to the
//! sample index. Bounded integers are drawn by rejection from `next_u64`, so
//! the stream of values depends only on the ChaCha8 keystream.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct SampleRng(ChaCha8Rng);

impl SampleRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream);
        SampleRng(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound`; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        // largest multiple of `bound` not exceeding 2^64
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % bound;
            }
        }
    }

    /// Uniform in `-bound..=bound`.
    pub fn symmetric(&mut self, bound: u32) -> i64 {
        self.below(2 * bound as u64 + 1) as i64 - bound as i64
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
