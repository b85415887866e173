//! Deterministic random streams.
//!
//! Every run owns one ChaCha8 key derived from its seed; independent
//! consumers inside the run (population sampling, scheduling, each
//! originator's perception) read from distinct ChaCha streams of that key, so
//! adding draws to one consumer never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub(crate) const STREAM_POPULATION: u64 = 0;
pub(crate) const STREAM_SCHEDULE: u64 = 1;
pub(crate) const STREAM_EVIDENCE: u64 = 2;
/// Originator `id` perceives evidence on stream `STREAM_PERCEPTION_BASE + id`.
pub(crate) const STREAM_PERCEPTION_BASE: u64 = 1 << 32;

/// Random source seeded from `seed`, positioned on `stream`.
pub fn stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer; a bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
