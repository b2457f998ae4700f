//! Seeding helpers. Every random draw in the crate goes through a
//! [`ChaCha8Rng`] seeded from a 64-bit value, so outputs are reproducible
//! across platforms.

pub use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed and a sequence of integer keys.
pub fn derive_seed(parent: u64, keys: &[u64]) -> u64 {
    keys.iter().fold(mix64(parent), |acc, &k| mix64(acc ^ mix64(k)))
}

/// FNV-1a, for folding string identifiers into seeds.
pub fn hash_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derived_seeds_differ_and_repeat() {
        let a = derive_seed(7, &[1, 2, 3]);
        assert_eq!(a, derive_seed(7, &[1, 2, 3]));
        assert_ne!(a, derive_seed(7, &[1, 3, 2]));
        assert_ne!(a, derive_seed(8, &[1, 2, 3]));
        let mut r1 = rng_from_seed(a);
        let mut r2 = rng_from_seed(a);
        assert_eq!(r1.random::<u64>(), r2.random::<u64>());
    }
}
