//! Seeded inputs shared by the benchmarks.

use numrad::sample::gaussian_matrix;
use numrad::Matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible pair of Gaussian `n x n` matrices.
pub fn pair(n: usize, seed: u64) -> (Matrix, Matrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (gaussian_matrix(n, &mut rng), gaussian_matrix(n, &mut rng))
}
