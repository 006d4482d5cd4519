//! Seed derivation.
//!
//! Every run gets its own ChaCha8 stream: the root seed picks the key and the
//! run index picks the stream, so runs are independent and reproducible
//! regardless of execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type RunRng = ChaCha8Rng;

/// Stream reserved for model training.
pub const TRAINING_STREAM: u64 = u64::MAX;

pub fn run_rng(seed: u64, run_index: u64) -> RunRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run_index);
    rng
}
