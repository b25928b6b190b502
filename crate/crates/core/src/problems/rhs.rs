use rand::distributions::{Distribution, Open01};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::la::BlockVector;
use crate::scalar::Scalar;

/// Density used when none is given: `min(0.5, 200 / (n·s))`.
pub fn default_density(n: usize, s: usize) -> f64 {
    (200.0 / (n * s).max(1) as f64).min(0.5)
}

/// Random `n × s` block with `round(density·n·s)` (at least one) entries
/// drawn uniformly from `(0, 1)` at uniformly chosen positions.
pub fn gen_rhs<T: Scalar>(n: usize, s: usize, seed: u64, density: f64) -> Result<BlockVector<T>> {
    if n == 0 || s == 0 {
        return Err(Error::InvalidArgument("right-hand side must be nonempty".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    let total = n * s;
    let count = ((density * total as f64).round() as usize).clamp(1, total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = vec![T::zero(); total];
    for pos in sample(&mut rng, total, count) {
        let v: f64 = Open01.sample(&mut rng);
        data[pos] = T::lit(v);
    }
    BlockVector::from_col_major(n, s, data)
}
