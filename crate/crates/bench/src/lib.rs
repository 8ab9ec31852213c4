//! Fixtures shared by the benchmarks.

use antinef_core::random::random_antinef;
use antinef_core::{corpus, realize, Divisor, ResolutionModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A bundled model by name.
pub fn model(name: &str) -> ResolutionModel {
    corpus::bundled_file(name).expect("bundled graph").model
}

/// `count` seeded random antinef divisors on `model`.
pub fn divisors(model: &ResolutionModel, count: usize, seed: u64) -> Vec<Divisor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_antinef(model, &mut rng, 10).expect("closure"))
        .collect()
}

/// The blown-up model of a realization run, for benchmarks on larger lattices.
pub fn blown_model(name: &str, seed: u64) -> ResolutionModel {
    let m = model(name);
    let f0 = divisors(&m, 1, seed).remove(0);
    realize(&m, &f0).expect("log terminal").blown_model().clone()
}
