//! Seeded deterministic randomness.
//!
//! All randomness goes through [`SeededRng`], a ChaCha20 stream keyed by a
//! 64-bit seed (expanded with `rand_core`'s fixed `seed_from_u64` scheme)
//! and an optional 64-bit stream id. Integer and rational draws are built
//! from raw `u64` words here rather than from a library distribution, so
//! the bitstream and the values derived from it are identical on every
//! platform and across dependency upgrades.

use num_bigint::BigInt;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::rational::Rational;

pub struct SeededRng {
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// An independent stream for the same seed, e.g. one per trial.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..n` by rejection sampling. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// Uniform integer in `0..=max`.
    pub fn up_to(&mut self, max: u64) -> u64 {
        if max == u64::MAX {
            self.next_u64()
        } else {
            self.below(max + 1)
        }
    }

    /// `N / 2^64` for a uniform nonzero 64-bit `N`: a rational in the open interval (0, 1).
    pub fn open_unit(&mut self) -> Rational {
        loop {
            let x = self.next_u64();
            if x != 0 {
                return Rational::new(BigInt::from(x), BigInt::from(1u128 << 64));
            }
        }
    }

    /// `N / 2^64` for a uniform 64-bit `N`: a rational in `[0, 1)`.
    pub fn unit(&mut self) -> Rational {
        Rational::new(BigInt::from(self.next_u64()), BigInt::from(1u128 << 64))
    }

    /// Bernoulli draw with exact rational probability `p` in [0, 1].
    pub fn bernoulli(&mut self, p: &Rational) -> bool {
        self.unit() < *p
    }

    /// Uniform rational on `[lo, hi)` (or `{lo}` when `lo == hi`).
    pub fn between(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        lo + (hi - lo) * self.unit()
    }
}
