//! Per-run seed derivation.
//!
//! Every repetition gets its own generator seeded from
//! `(master_seed, run_index)` so runs can execute in any order.

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for repetition `run` of a study keyed by `master`.
pub fn run_seed(master: u64, run: usize) -> u64 {
    mix64(master ^ mix64(run as u64 ^ 0xA5A5_5A5A_0000_0001))
}

/// Derives an independent stream seed from a parent seed and a tag.
pub fn substream(parent: u64, tag: u64) -> u64 {
    mix64(parent.rotate_left(17) ^ mix64(tag))
}
