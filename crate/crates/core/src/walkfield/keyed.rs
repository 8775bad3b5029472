//! Counter-based keyed randomness.
//!
//! Every random word is a pure function of a 64-bit stream id and a counter,
//! so any stream can be materialized lazily and in any order.

use super::site::Site;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `value` into the running hash `h`.
#[inline]
pub fn absorb(h: u64, value: u64) -> u64 {
    mix64(h ^ mix64(value.wrapping_add(GOLDEN)))
}

/// Stream id for a tagged `(seed, index)` pair.
pub fn derive_seed(tag: u64, seed: u64, index: u64) -> u64 {
    absorb(absorb(mix64(tag), seed), index)
}

pub fn site_hash(h: u64, site: &Site) -> u64 {
    let mut h = absorb(h, site.dim() as u64);
    for &c in site.coords() {
        h = absorb(h, c as u32 as u64);
    }
    h
}

/// `k`-th word of stream `stream`.
#[inline]
pub fn stream_word(stream: u64, k: u64) -> u64 {
    mix64(stream.wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Sequential generator over one keyed stream.
#[derive(Debug, Clone)]
pub struct KeyedRng {
    stream: u64,
    counter: u64,
}

impl KeyedRng {
    pub fn new(stream: u64) -> Self {
        KeyedRng { stream, counter: 0 }
    }

    pub fn from_parts(tag: u64, seed: u64, index: u64) -> Self {
        Self::new(derive_seed(tag, seed, index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let w = stream_word(self.stream, self.counter);
        self.counter += 1;
        w
    }

    /// Uniform in `[0, 1)` with 53 bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `0..n` by multiply-shift; bias below `n / 2^64`.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}

/// Uniform value in `[0, 1)` at a keyed lattice site.
pub fn site_uniform(stream: u64, site: &Site) -> f64 {
    (site_hash(stream, site) >> 11) as f64 / (1u64 << 53) as f64
}
