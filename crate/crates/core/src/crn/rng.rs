use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random source used by every simulation in the crate.
pub type SimRng = ChaCha8Rng;

/// Stream for replicate `replicate` of an experiment seeded with `master`.
///
/// Each (master, replicate) pair maps to an independent ChaCha stream, so a
/// replicate draws the same numbers whatever order replicates run in.
pub fn replicate_rng(master: u64, replicate: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(replicate);
    rng
}
