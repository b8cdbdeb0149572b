//! Seed derivation for the experiment grid.
//!
//! `derive_seed(master, [i, j, ...])` folds each index into a splitmix64
//! state: `h = mix(master)`, then `h = mix(h ^ mix(i))` per index. Every step
//! is a bijection of `h`, so two index lists of equal length that differ
//! anywhere always yield different seeds.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 output function.
#[inline]
pub fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, indices: &[u64]) -> u64 {
    indices.iter().fold(mix(master), |h, &i| mix(h ^ mix(i)))
}
