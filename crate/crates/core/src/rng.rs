//! Seedable random stream and the sampling primitives built on it.
//!
//! The generator is xoshiro256** seeded through SplitMix64 (the reference
//! seeding procedure for the xoshiro family), so a run can be reproduced in
//! any language that implements those two published algorithms together with
//! the helpers below:
//!
//! * [`Stream::below`] draws an unbiased integer in `[0, n)` with Lemire's
//!   widening-multiply rejection method.
//! * [`Stream::unit`] maps the top 53 bits of a draw to `[0, 1)`.
//! * [`Stream::choose`] picks `k` of `n` items by a partial Fisher–Yates
//!   shuffle: for `i` in `0..k`, swap slot `i` with slot `i + below(n - i)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// A deterministic random stream owned by a single run.
#[derive(Debug, Clone)]
pub struct Stream {
    inner: Xoshiro256StarStar,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let mut m = u128::from(self.next_u64()) * u128::from(n);
        let mut lo = m as u64;
        if lo < n {
            let threshold = n.wrapping_neg() % n;
            while lo < threshold {
                m = u128::from(self.next_u64()) * u128::from(n);
                lo = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Uniform real in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli trial with success probability `p`.
    #[inline]
    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Selects `k` items uniformly without replacement. The first `k` slots
    /// of `items` hold the selection afterwards (in draw order); the slice is
    /// returned for convenience.
    pub fn choose<'a, T>(&mut self, items: &'a mut [T], k: usize) -> &'a mut [T] {
        let n = items.len();
        let k = k.min(n);
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            items.swap(i, j);
        }
        &mut items[..k]
    }
}

/// SplitMix64 finalizer; a bijective 64-bit mix.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one seed: `h = mix64(h ^ w)` starting from
/// `h = mix64(first)`.
pub fn derive_seed(words: &[u64]) -> u64 {
    let mut iter = words.iter();
    let mut h = mix64(iter.next().copied().unwrap_or(0));
    for &w in iter {
        h = mix64(h ^ w);
    }
    h
}
