//! Shared fixtures for the criterion benches.

use ptmoments::ensemble::{index_rng, sample_state, Ensemble};
use ptmoments::DensityMatrix;

/// `n` mixed-rank states from a fixed seed.
pub fn fixture_states(n: usize) -> Vec<DensityMatrix> {
    (0..n as u64)
        .map(|i| sample_state(Ensemble::MixedRank, &mut index_rng(0xbe7c, i)))
        .collect()
}
