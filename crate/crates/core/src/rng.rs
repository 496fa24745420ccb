//! Seeded, splittable random streams.
//!
//! Every random draw in the crate comes from a [`RngSeed`], a pair of a
//! 64-bit master seed and a stream index. The pair is turned into a
//! ChaCha8 generator: the master seed is expanded into the 256-bit key with
//! `SeedableRng::seed_from_u64`, and the stream index selects ChaCha's
//! 64-bit stream (nonce). Identical pairs always give identical draws, and
//! distinct stream indices give independent sequences under the same key.
//!
//! Job keys (run id, mechanism index, draw index, ...) are folded into a
//! stream index with [`RngSeed::child`], a SplitMix64-style mix. Because the
//! stream only depends on the key and never on scheduling order, parallel
//! execution cannot change results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngSeed {
    pub const fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Stream 0 of the given master seed.
    pub const fn from_master(master_seed: u64) -> Self {
        Self::new(master_seed, 0)
    }

    /// Derives a sub-stream keyed by `parts`.
    ///
    /// The derivation is a pure function of `(self, parts)`.
    pub fn child(&self, parts: &[u64]) -> Self {
        let mut h = splitmix64(self.stream_index ^ 0x6a09_e667_f3bc_c909);
        for &p in parts {
            h = splitmix64(h ^ splitmix64(p.wrapping_add(0x9e37_79b9_7f4a_7c15)));
        }
        Self::new(self.master_seed, h)
    }

    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn identical_seeds_identical_draws() {
        let (mut a, mut b) = (RngSeed::new(7, 3).rng(), RngSeed::new(7, 3).rng());
        for _ in 0..8 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }

    #[test]
    fn streams_differ() {
        let x: u64 = RngSeed::new(7, 3).rng().random();
        let y: u64 = RngSeed::new(7, 4).rng().random();
        let z: u64 = RngSeed::new(8, 3).rng().random();
        assert_ne!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn child_is_pure_and_key_sensitive() {
        let root = RngSeed::from_master(42);
        assert_eq!(root.child(&[1, 2]), root.child(&[1, 2]));
        assert_ne!(root.child(&[1, 2]), root.child(&[2, 1]));
        assert_ne!(root.child(&[1]), root.child(&[1, 0]));
        assert_eq!(root.child(&[5]).master_seed, 42);
    }

    #[test]
    fn frozen_first_draw() {
        // a dependency upgrade that changes the stream must fail here
        const FROZEN: u64 = 7424550030962593201;
        let v: u64 = RngSeed::new(1, 0).rng().random();
        assert_eq!(v, FROZEN);
    }
}
