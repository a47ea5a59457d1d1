//! Seed derivation for reproducible, independent random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a path of stream labels.
pub fn derive_seed(parent: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(mix64(parent), |acc, &l| mix64(acc ^ mix64(l)))
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream labels, kept distinct so arrival times and turn intents never share a stream.
pub(crate) mod label {
    pub const ARRIVALS: u64 = 1;
    pub const INTENTS: u64 = 2;
    pub const PREDICTION: u64 = 3;
    pub const BUILDER: u64 = 4;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_by_label() {
        let a = derive_seed(7, &[1, 0, 0]);
        let b = derive_seed(7, &[1, 0, 1]);
        let c = derive_seed(7, &[2, 0, 0]);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(7, &[1, 0, 0]));
    }
}
