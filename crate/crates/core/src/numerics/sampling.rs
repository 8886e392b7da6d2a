//! Seeded, index-addressable random streams.
//!
//! Every sample index gets its own ChaCha8 stream keyed by `(seed, index)`, so
//! a sample's value depends only on the seed and its position. Evaluating
//! indices in any order or in parallel yields identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::linalg::{norm2, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    /// Independent generator for sample `index`.
    pub fn stream(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }

    /// A child seed, for handing a distinct seed to a sub-experiment.
    pub fn derive(self, index: u64) -> Seed {
        Seed(self.stream(index).gen())
    }
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, d: usize) -> Vector {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// One uniformly distributed point on `S^{d-1}` (normalized Gaussian).
pub fn unit_vector<R: Rng>(rng: &mut R, d: usize) -> Vector {
    loop {
        let g = gaussian_vector(rng, d);
        let n = norm2(&g);
        if n > 1e-300 {
            return g.into_iter().map(|x| x / n).collect();
        }
    }
}

/// `n` points on the unit sphere in `R^d`; point `i` is drawn from stream `i`.
pub fn sample_unit_sphere(d: usize, n: usize, seed: Seed) -> Vec<Vector> {
    assert!(d >= 1, "sphere dimension must be at least 1");
    (0..n)
        .map(|i| unit_vector(&mut seed.stream(i as u64), d))
        .collect()
}

/// Uniform `f64` in `[lo, hi)` from the stream for `index`.
pub fn uniform_at(seed: Seed, index: u64, lo: f64, hi: f64) -> f64 {
    seed.stream(index).gen_range(lo..hi)
}
