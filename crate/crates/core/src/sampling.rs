//! Seeded randomness: a stable seed hash and random SU(d) elements.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{expm_i_hermitian, CMatrix};
use crate::su_algebra::SuBasis;

pub type SeededRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for item `index` under `base`: splitmix64(splitmix64(base) ^ index).
/// Stable across platforms and independent of evaluation order.
pub fn stable_hash(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base) ^ index)
}

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// exp(i Σ_a x_a t^a) with standard normal x_a.
pub fn random_su(basis: &SuBasis, rng: &mut SeededRng) -> CMatrix {
    let x: Vec<f64> = (0..basis.len()).map(|_| StandardNormal.sample(rng)).collect();
    expm_i_hermitian(&basis.combine(&x), 1.0)
}
