//! Deterministic seed derivation.
//!
//! Every random draw in the crate comes from a `ChaCha8Rng` seeded with a
//! 64-bit value derived from a master seed through [`derive`]. The mix is the
//! SplitMix64 finalizer applied to a golden-ratio-weighted combination of the
//! parent seed and the child index:
//!
//! ```text
//! derive(parent, index) = splitmix64(parent ^ splitmix64(index + 0x9E3779B97F4A7C15))
//! ```
//!
//! Because each trial (and each sensor within a trial) owns its own stream,
//! results do not depend on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream tag for calibration (H0) simulations.
pub const STREAM_CALIBRATION: u64 = 0xCA11;
/// Stream tag for detection-probability evaluation.
pub const STREAM_EVALUATION: u64 = 0xE7A1;
/// Stream tag for ROC null samples.
pub const STREAM_ROC_NULL: u64 = 0x0C00;
/// Stream tag for ROC alternative samples.
pub const STREAM_ROC_ALT: u64 = 0x0C01;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `parent` and `index`.
pub fn derive(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index.wrapping_add(GOLDEN_GAMMA)))
}

/// Seed for point `point` of stream `stream` under `master`.
pub fn point_seed(master: u64, stream: u64, point: u64) -> u64 {
    derive(derive(master, stream), point)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
