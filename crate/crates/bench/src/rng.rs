//! Instance PRNG.
//!
//! SplitMix64 with the 64-bit seed used directly as the initial state:
//!
//! ```text
//! state = state + 0x9e3779b97f4a7c15            (wrapping)
//! z = (state ^ (state >> 30)) * 0xbf58476d1ce4e5b9
//! z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//! output z ^ (z >> 31)
//! ```
//!
//! A value below `n` is `(x * n) >> 64` computed in 128 bits, one draw per
//! value. The slight bias is irrelevant for instance generation and keeps
//! the sequence easy to reproduce in other languages.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub struct InstanceRng(SplitMix64);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// The first `k` items of a Fisher-Yates shuffle of `items`, swapping
    /// position `i` with a position drawn from `i..len`.
    pub fn sample<T>(&mut self, mut items: Vec<T>, k: usize) -> Vec<T> {
        debug_assert!(k <= items.len());
        for i in 0..k {
            let j = i + self.below(items.len() - i);
            items.swap(i, j);
        }
        items.truncate(k);
        items
    }
}
