#![allow(dead_code)]

use friendly_cuts::generators::gnp;
use friendly_cuts::sparsifier::SparsifyConfig;
use friendly_cuts::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SIZE: usize = 510;
pub const PROBABILITIES: [f64; 3] = [0.2, 0.4, 0.6];

/// `(n, p, seed, graph)` for the small-graph corpus: n runs over 4..=14,
/// p over 0.2, 0.4, 0.6.
pub fn corpus() -> Vec<(usize, f64, u64, Graph)> {
    (0..CORPUS_SIZE)
        .map(|i| {
            let n = 4 + i % 11;
            let p = PROBABILITIES[(i / 11) % 3];
            let seed = i as u64;
            let g = gnp(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            (n, p, seed, g)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smaller low-degree factor so that small graphs actually get contracted.
pub fn stress_config(seed: u64) -> SparsifyConfig {
    SparsifyConfig {
        low_degree_factor: 4,
        ..SparsifyConfig::default()
    }
    .with_seed(seed)
}
