//! Seeded random streams.
//!
//! Every randomized routine derives its generator from a user seed plus a
//! stream index, so parallel workers produce the same numbers no matter how
//! work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for `stream` under `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
