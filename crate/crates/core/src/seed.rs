//! Deterministic splitting of one root seed into per-component seeds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Components that draw randomness. The discriminant feeds the split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    IkFit = 1,
    Synthetic = 2,
    Downsample = 3,
    TauSubsample = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for `component` in repetition `index` under `root`.
pub fn derive(root: u64, component: Component, index: u64) -> u64 {
    splitmix64(splitmix64(root ^ splitmix64(component as u64)).wrapping_add(index))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
