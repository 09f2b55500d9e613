//! Deterministic 64-bit seed derivation.
//!
//! Experiment sweeps need one independent random stream per run, with
//! results that do not depend on scheduling or worker count. Streams are
//! keyed by mixing the master seed with the run coordinates through
//! SplitMix64 finalizers; the exact construction is recorded in every
//! experiment manifest so other implementations can reproduce the streams.

/// SplitMix64 finalizer step (Steele, Lea & Flood's published constants).
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a master seed and an ordered coordinate list.
///
/// Each coordinate is individually finalized before being folded in, so
/// `split_seed(m, &[a, b])`, `split_seed(m, &[b, a])` and
/// `split_seed(m, &[a ^ b])` all differ.
pub fn split_seed(master: u64, coords: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &c in coords {
        state = splitmix64(state ^ splitmix64(c));
    }
    state
}

/// One-line description of the scheme, embedded in experiment manifests.
pub const SEED_SCHEME: &str = "splitmix64 chain: s=splitmix64(master); for each coord c: s=splitmix64(s xor splitmix64(c)); stream generator: ChaCha8 seeded via seed_from_u64(s)";

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn splitmix_reference_values() {
        // First outputs of the reference SplitMix64 sequence with seed 0:
        // each call advances the state by the golden gamma before mixing.
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0x9E37_79B9_7F4A_7C15), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn order_and_arity_sensitive() {
        let m = 42;
        let a = split_seed(m, &[1, 2]);
        let b = split_seed(m, &[2, 1]);
        let c = split_seed(m, &[3]);
        let d = split_seed(m, &[1, 2, 0]);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn no_collisions_over_small_grid() {
        let mut seen = HashSet::new();
        for n in 0..8u64 {
            for inst in 0..64u64 {
                for run in 0..16u64 {
                    assert!(seen.insert(split_seed(7, &[n, inst, run])));
                }
            }
        }
    }
}
