//! Shared inputs for the benchmarks.

use flatsurf_core::{sample, FlatSurface, SurfacePoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `n` reproducible random point pairs on `surface`.
pub fn point_pairs(
    surface: &FlatSurface,
    n: usize,
    seed: u64,
) -> Vec<(SurfacePoint, SurfacePoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = sample::random_point(&mut rng, surface);
            let y = sample::random_point(&mut rng, surface);
            (x, y)
        })
        .collect()
}
