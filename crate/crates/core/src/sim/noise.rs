//! Seeded additive white Gaussian noise.
//!
//! Uniform variates come from ChaCha20 (a counter-based stream cipher, so a
//! given seed yields the same stream on every platform). Each sample draws
//! two uniforms and turns them into an independent `(re, im)` Gaussian pair
//! with the Box–Muller transform. Samples are visited in storage order.

use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::domain::SignalMap;
use crate::error::{Error, Result};

/// Stream of standard normal pairs.
pub struct GaussianStream {
    rng: ChaCha20Rng,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on `(0, 1]`, 53 random bits.
    fn open_unit(&mut self) -> f64 {
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals.
    pub fn next_pair(&mut self) -> (f64, f64) {
        let u1 = self.open_unit();
        let u2 = self.open_unit();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        (radius * angle.cos(), radius * angle.sin())
    }
}

/// Add independent `N(0, sigma²)` noise to the real and imaginary part of
/// every sample. `sigma == 0` returns the input unchanged.
pub fn add_awgn(map: &SignalMap, sigma: f64, seed: u64) -> Result<SignalMap> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!(
            "noise standard deviation must be >= 0, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(map.clone());
    }
    let mut stream = GaussianStream::new(seed);
    let samples = map
        .samples()
        .iter()
        .map(|z| {
            let (a, b) = stream.next_pair();
            z + Complex64::new(sigma * a, sigma * b)
        })
        .collect();
    SignalMap::new(map.domain(), map.channels(), samples)
}

/// `10 log10(peak / (sigma · sqrt(n_range_cells)))`.
pub fn snr_db(peak_cross_section: f64, sigma: f64, n_range_cells: usize) -> Result<f64> {
    if !(peak_cross_section > 0.0 && sigma > 0.0 && n_range_cells > 0) {
        return Err(Error::domain("SNR arguments must all be positive"));
    }
    Ok(10.0 * (peak_cross_section / (sigma * (n_range_cells as f64).sqrt())).log10())
}
