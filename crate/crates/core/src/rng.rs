//! Seeding and stable hashing.
//!
//! All randomness flows through [`ChaCha8Rng`] generators whose seeds are
//! derived with a fixed 64-bit FNV-1a hash, so results do not depend on the
//! platform or the standard library's hasher.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Incremental FNV-1a with a final avalanche step.
#[derive(Debug, Clone, Copy)]
pub struct StableHasher(u64);

impl Default for StableHasher {
    fn default() -> Self {
        Self(FNV_OFFSET)
    }
}

impl StableHasher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write(&mut self, bytes: &[u8]) -> &mut Self {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
        self
    }

    pub fn write_u64(&mut self, v: u64) -> &mut Self {
        self.write(&v.to_le_bytes())
    }

    /// Length-prefixed so that ("ab","c") and ("a","bc") differ.
    pub fn write_str(&mut self, s: &str) -> &mut Self {
        self.write_u64(s.len() as u64);
        self.write(s.as_bytes())
    }

    pub fn finish(&self) -> u64 {
        // splitmix64 finaliser
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

pub fn stable_hash_words(words: &[u64]) -> u64 {
    let mut h = StableHasher::new();
    for &w in words {
        h.write_u64(w);
    }
    h.finish()
}

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child seed for one experiment cell.
pub fn child_seed(base: u64, benchmark: &str, holdout: &str, repetition: u32) -> u64 {
    StableHasher::new()
        .write_u64(base)
        .write_str(benchmark)
        .write_str(holdout)
        .write_u64(repetition as u64)
        .finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_values() {
        // frozen: changing the hash silently changes every seeded result.
        // Reference values come from an independent FNV-1a + splitmix64
        // computation; raw FNV-1a("a") is the published 0xaf63dc4c8601ec8c.
        assert_eq!(StableHasher::new().write(b"abc").finish(), 996_580_060_897_260_808);
        assert_eq!(child_seed(1, "LSH-NB", "ant-1.7", 1), 4_118_641_222_712_584_757);
        assert_ne!(child_seed(1, "LSH-NB", "ant-1.7", 1), child_seed(1, "LSH-NB", "ant-1.7", 2));
        assert_ne!(child_seed(1, "ab", "c", 1), child_seed(1, "a", "bc", 1));
        assert_eq!(StableHasher::new().write(b"").finish(), StableHasher::new().finish());
    }
}
