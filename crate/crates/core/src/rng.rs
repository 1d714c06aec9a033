//! Seed splitting for reproducible, parallel-safe random streams.
//!
//! Every trial gets its own seed derived from the master seed and a pair of
//! coordinates; inside an [`ArmSource`](crate::ArmSource) each arm reads
//! from its own ChaCha stream, so the rewards of one arm do not depend on
//! how sampling of other arms is interleaved.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed` and two coordinates (e.g. sweep point and trial).
pub fn split(seed: u64, a: u64, b: u64) -> u64 {
    mix64(mix64(seed ^ mix64(a)) ^ mix64(b.wrapping_add(0xD134_2543_DE82_EF95)))
}

/// ChaCha stream `stream` of the generator keyed by `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
