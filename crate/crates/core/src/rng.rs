//! Seed derivation for reproducible, independent random streams.
//!
//! Every stream in a run is a ChaCha8 generator whose seed is mixed from the
//! experiment seed and a fixed set of stream coordinates with SplitMix64, so
//! results do not depend on execution order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fold a list of coordinates into a seed.
pub fn derive_seed(base: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(mix64(base), |acc, &c| mix64(acc ^ mix64(c)))
}

/// Seed of one (population, repetition) run: `seed XOR hash(population, repetition)`.
pub fn run_seed(seed: u64, population: usize, repetition: usize) -> u64 {
    seed ^ derive_seed(0x5EED, &[population as u64, repetition as u64])
}

pub fn stream(seed: u64, coords: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, coords))
}

/// Stream labels used inside one run.
pub mod streams {
    pub const SCENARIO: u64 = 1;
    pub const AGENT: u64 = 2;
}
