//! Deterministic RNG for schedulers, movement adversaries, and test inputs.
//!
//! xorshift64* with a splitmix64 seeder: stable output across platforms and
//! compiler versions, which is what trace replay needs. Not cryptographic.

/// Deterministic RNG with a single 64-bit state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimRng {
    state: u64,
}

/// splitmix64 step, also used to mix seed material into stream keys.
#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a stream key from a seed and a sequence of words (round numbers,
/// robot ids, coordinate bits). Order-sensitive, collision-resistant enough
/// for simulation streams.
pub fn mix_stream(seed: u64, words: &[u64]) -> u64 {
    let mut h = splitmix64(seed ^ 0xA076_1D64_78BD_642F);
    for &w in words {
        h = splitmix64(h ^ w);
    }
    h
}

impl SimRng {
    /// A zero state would lock up xorshift, so seeds are passed through
    /// splitmix64 first.
    pub fn new(seed: u64) -> Self {
        let mut s = splitmix64(seed);
        if s == 0 {
            s = 0x9E37_79B9_7F4A_7C15;
        }
        Self { state: s }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn f64_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform in `[lo, hi)`.
    pub fn f64_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.f64_unit() * (hi - lo)
    }

    /// Uniform in `[0, n)`. Modulo bias is irrelevant at simulation scale.
    pub fn usize_below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Uniform nonempty subset of `{0, .., n-1}`, `n <= 64`.
    pub fn nonempty_subset_mask(&mut self, n: usize) -> u64 {
        debug_assert!(n >= 1 && n <= 64);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        loop {
            let m = self.next_u64() & mask;
            if m != 0 {
                return m;
            }
        }
    }
}
