//! Deterministic inputs shared by the criterion benchmarks.

use std::sync::Arc;

use autqm::{GPWord, VertexGraph, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_word(rank: usize, len: usize, seed: u64) -> Word {
    Word::random(&mut ChaCha8Rng::seed_from_u64(seed), rank, len)
}

/// A 6-cycle with mixed labels.
pub fn fixture_graph() -> Arc<VertexGraph> {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)];
    Arc::new(VertexGraph::new(vec![0, 2, 3, 0, 2, 4], &edges).expect("valid graph"))
}

pub fn fixture_gp_word(graph: &Arc<VertexGraph>, syllables: usize, seed: u64) -> GPWord {
    GPWord::random(graph, &mut ChaCha8Rng::seed_from_u64(seed), syllables)
}
