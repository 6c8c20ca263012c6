//! Seeded, counter-derived RNG substreams.
//!
//! Every Monte Carlo loop in this crate gives replicate `b` its own stream
//! derived from `(seed, b)`. Results are then bit-identical whether the
//! replicates run serially or on any number of threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used throughout: small-round ChaCha with independent streams.
pub type Rng = ChaCha8Rng;

/// Deterministic substream `index` of the generator seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
