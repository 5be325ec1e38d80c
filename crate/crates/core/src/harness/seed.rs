use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream for one step of one replication.
///
/// The ChaCha key comes from `master_seed` and the 64-bit stream id packs
/// `(replication, t)`, so every step is addressable without replaying the
/// ones before it. Both indices must fit in 32 bits.
pub fn seed_stream(master_seed: u64, replication: u32, t: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream((u64::from(replication) << 32) | u64::from(t));
    rng
}
