//! Seeded randomness. All algorithms draw from `ChaCha8Rng`, which is
//! reproducible across platforms, and child streams are derived by mixing
//! a parent seed with an index.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type AlgoRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> AlgoRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child seed for stream `index` of `master` (splitmix64 finalizer over
/// both words).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for a path of indices, e.g. `(round, run, attempt)`.
pub fn derive_path(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(master, |s, &i| derive_seed(s, i))
}
