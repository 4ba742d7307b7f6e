//! Seed derivation for reproducible, scheduling-independent parallel batches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 over the concatenated inputs; cheap, well-mixed, deterministic.
pub fn derive_seed(master: u64, salt: u64, index: u64) -> u64 {
    let mut x = master ^ salt.rotate_left(17) ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for _ in 0..3 {
        x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = x;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x = z ^ (z >> 31);
    }
    x
}

pub fn rng_for(master: u64, salt: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, salt, index))
}
