//! Seeded sampling of base points, fiber coordinates and test vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator name recorded in reports.
pub const RNG_NAME: &str = "ChaCha8Rng";

/// Half-width of the base sampling box `[-0.2, 0.2]^{n+1}`.
pub const BASE_BOX: f64 = 0.2;
/// Half-width of the fiber sampling box `[-0.5, 0.5]^n`.
pub const FIBER_BOX: f64 = 0.5;

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, dim: usize, half_width: f64) -> Vec<f64> {
        (0..dim)
            .map(|_| self.rng.random_range(-half_width..=half_width))
            .collect()
    }

    pub fn base_point(&mut self, dim: usize) -> Vec<f64> {
        self.uniform(dim, BASE_BOX)
    }

    pub fn fiber(&mut self, dim: usize) -> Vec<f64> {
        self.uniform(dim, FIBER_BOX)
    }

    /// Test vector with components in `[-1, 1]`.
    pub fn vector(&mut self, dim: usize) -> Vec<f64> {
        self.uniform(dim, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        assert_eq!(a.base_point(3), b.base_point(3));
        assert_eq!(a.fiber(2), b.fiber(2));
    }

    #[test]
    fn boxes_are_respected() {
        let mut s = Sampler::new(3);
        for _ in 0..100 {
            assert!(s.base_point(4).iter().all(|v| v.abs() <= BASE_BOX));
            assert!(s.fiber(3).iter().all(|v| v.abs() <= FIBER_BOX));
        }
    }
}
