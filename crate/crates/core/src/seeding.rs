//! Deterministic derivation of independent random streams from one seed.
//!
//! Every stream is a ChaCha8 generator keyed by SplitMix64 chained over a
//! path of integers: `(domain)` for the cell layout, `(domain, realization,
//! user_id)` for a user. Plain XOR of the components is avoided because it
//! makes `(r, u)` and `(u, r)` share a stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const LAYOUT_DOMAIN: u64 = 0x4c41_594f_5554;
pub const USER_DOMAIN: u64 = 0x5553_4552;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn layout_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, &[LAYOUT_DOMAIN]))
}

pub fn user_rng(seed: u64, realization: u32, user_id: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(
        seed,
        &[USER_DOMAIN, u64::from(realization), user_id as u64],
    ))
}
