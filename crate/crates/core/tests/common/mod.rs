#![allow(dead_code)]

use polynewton::problems::{random_polynomial_problem, ProblemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SIZES: [usize; 4] = [1, 5, 20, 50];

/// Non-empty subsets of {2, 3, 4}, indexed by a 3-bit mask.
pub fn degree_subset(mask: usize) -> Vec<usize> {
    [2, 3, 4]
        .into_iter()
        .enumerate()
        .filter(|(b, _)| mask >> b & 1 == 1)
        .map(|(_, d)| d)
        .collect()
}

pub fn density_for(n: usize) -> f64 {
    match n {
        1 => 1.0,
        5 => 0.3,
        20 => 0.1,
        _ => 0.05,
    }
}

/// 100 seeded random systems cycling through the sizes and all seven
/// non-empty degree subsets of {2, 3, 4}.
pub fn corpus() -> Vec<ProblemSpec> {
    (0..100u64)
        .map(|i| {
            let n = SIZES[i as usize % 4];
            let degrees = degree_subset(i as usize % 7 + 1);
            random_polynomial_problem(n, &degrees, density_for(n), 1000 + i).unwrap()
        })
        .collect()
}

/// Points drawn uniformly from `[−1, 1]ⁿ`.
pub fn random_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect())
        .collect()
}
