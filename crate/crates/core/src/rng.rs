//! Seeding and inverse-CDF sampling shared by the simulators.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator used by every simulator in the crate.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed for `stream` from a root seed
/// (SplitMix64 finalizer over the pair).
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut z = root
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Cumulative sums of a probability vector.
pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|&p| {
            acc += p;
            acc
        })
        .collect()
}

/// Inverse-CDF lookup: the first index whose cumulative weight exceeds `u`.
/// Zero-width entries are never selected, so ties fall to the lower index.
/// If rounding leaves `u` past the last boundary, the last index with
/// positive weight is returned.
pub(crate) fn sample_index(cum: &[f64], u: f64) -> usize {
    let i = cum.partition_point(|&c| c <= u);
    if i < cum.len() {
        return i;
    }
    let mut j = cum.len() - 1;
    while j > 0 && cum[j] <= cum[j - 1] {
        j -= 1;
    }
    j
}

/// One uniform draw in `[0, 1)`.
pub(crate) fn uniform(rng: &mut SimRng) -> f64 {
    rng.random::<f64>()
}
