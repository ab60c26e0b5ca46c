//! Seeded randomness. All generators in this crate draw from a ChaCha stream
//! so that every instance, starting point and power-iteration probe is
//! reproducible from a `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::Vector;
use crate::scalar::Scalar;

/// Deterministic RNG for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard normal draw. Sampling happens in `f64` and is then converted,
/// so the stream consumed from `rng` does not depend on `T`.
pub fn standard_normal<T: Scalar, R: Rng>(rng: &mut R) -> T {
    let g: f64 = rng.sample(StandardNormal);
    T::from_config(g)
}

/// Vector with i.i.d. standard normal coordinates.
pub fn gaussian_vector<T: Scalar, R: Rng>(dim: usize, rng: &mut R) -> Vector<T> {
    Vector::from_fn(dim, |_| standard_normal(rng))
}

/// Derive a sub-seed for an independent stream (instance index, stage tag).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // SplitMix64 step; avoids correlated ChaCha streams for nearby seeds.
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
