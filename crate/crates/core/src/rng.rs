//! Seeded random streams. ChaCha8 is counter-based, so distinct seeds give
//! independent, reproducible streams that are safe to draw in parallel.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identity string recorded in stream metadata and manifests.
pub const GENERATOR_ID: &str = "chacha8";

pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw in the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        // 53 random bits, offset by half an ulp to exclude both endpoints.
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Exponential draw with the given rate, by inverse transform.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -libm::log(self.uniform_open()) / rate
    }

    /// Standard normal draw (Box-Muller, first component).
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform_open();
        let u2 = self.uniform_open();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }
}
