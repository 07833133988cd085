//! Deterministic seed derivation.
//!
//! Monte Carlo runs derive an independent generator per trial from
//! `(master seed, tags...)`, so results do not depend on trial ordering and
//! repeated runs are reproducible bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; full-period mixing of a 64-bit state.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Collapse `(master, tags...)` into one seed.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &t in tags {
        state ^= t.wrapping_mul(0xd134_2543_de82_ef95);
        out ^= splitmix64(&mut state);
    }
    out
}

/// Generator for one tagged trial.
pub fn trial_rng(master: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn derivation_is_deterministic_and_tag_sensitive() {
        assert_eq!(derive_seed(1, &[2, 3]), derive_seed(1, &[2, 3]));
        assert_ne!(derive_seed(1, &[2, 3]), derive_seed(1, &[3, 2]));
        assert_ne!(derive_seed(1, &[2]), derive_seed(2, &[2]));
        assert_ne!(derive_seed(1, &[]), derive_seed(1, &[0]));
    }

    #[test]
    fn trial_rngs_differ_across_trials() {
        let a = trial_rng(42, &[0]).next_u64();
        let b = trial_rng(42, &[1]).next_u64();
        assert_ne!(a, b);
        assert_eq!(trial_rng(42, &[0]).next_u64(), a);
    }
}
