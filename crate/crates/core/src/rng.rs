//! Deterministic RNG streams.
//!
//! Every randomized stage derives its own ChaCha8 stream from the run seed
//! plus a list of string tags (stage name, strategy, level, ...), so adding
//! or reordering stages never perturbs the draws of another stage.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use sha2::{Digest, Sha256};

/// RNG stream keyed by `(seed, tags...)`.
pub fn derive_rng(seed: u64, tags: &[&str]) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    for tag in tags {
        hasher.update([0xff]);
        hasher.update(tag.as_bytes());
    }
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Standard normal draw (Box-Muller on two uniform draws).
pub fn next_gaussian<R: rand::Rng>(rng: &mut R) -> f64 {
    use crate::math::{cos, ln, sqrt};
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    sqrt(-2.0 * ln(u1)) * cos(2.0 * core::f64::consts::PI * u2)
}
