//! Seeded additive white Gaussian noise.
//!
//! Samples come from `ChaCha20Rng` (crate `rand_chacha` 0.9) seeded with
//! `seed_from_u64`, pushed through the ziggurat sampler of
//! `rand_distr::StandardNormal` (crate `rand_distr` 0.5). Exact versions are
//! pinned by `Cargo.lock`; changing either crate may change realizations.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::signal::GraphSignal;

/// Noise standard deviation (in pixel intensity units) and generator seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::param("sigma", format!("{sigma} is not a non-negative number")));
        }
        Ok(Self { sigma, seed })
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self { sigma: 20.0, seed: 0 }
    }
}

/// `u_i + sigma * z_i` with `z_i` i.i.d. standard normal.
///
/// Values are not clamped to the pixel range.
pub fn add_awgn(u: &GraphSignal, spec: &NoiseSpec) -> GraphSignal {
    if spec.sigma == 0.0 {
        return u.clone();
    }
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let values = u
        .as_slice()
        .iter()
        .map(|&v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v + spec.sigma * z
        })
        .collect();
    GraphSignal::from_finite(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> GraphSignal {
        GraphSignal::new((0..n).map(|i| (i % 256) as f64).collect()).unwrap()
    }

    #[test]
    fn zero_sigma_is_identity() {
        let u = ramp(100);
        assert_eq!(add_awgn(&u, &NoiseSpec::new(0.0, 7).unwrap()), u);
    }

    #[test]
    fn seeded_noise_is_reproducible() {
        let u = ramp(500);
        let spec = NoiseSpec::new(20.0, 1234).unwrap();
        assert_eq!(add_awgn(&u, &spec), add_awgn(&u, &spec));
        let other = NoiseSpec::new(20.0, 1235).unwrap();
        assert_ne!(add_awgn(&u, &spec), add_awgn(&u, &other));
    }

    #[test]
    fn sample_std_is_near_sigma() {
        // n = 16384: the sample std of N(0, 20^2) has std ~ 20 / sqrt(2n) = 0.11,
        // so [19.5, 20.5] is a > 4.5 sigma window
        let n = 16384;
        let u = GraphSignal::zeros(n);
        for seed in 0..5 {
            let noisy = add_awgn(&u, &NoiseSpec::new(20.0, seed).unwrap());
            let mean = noisy.mean();
            let var = noisy.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let std = var.sqrt();
            assert!((19.5..=20.5).contains(&std), "seed {seed}: std {std}");
            assert!(mean.abs() <= 4.0 * 20.0 / (n as f64).sqrt(), "seed {seed}: mean {mean}");
        }
    }

    #[test]
    fn rejects_negative_sigma() {
        assert!(NoiseSpec::new(-1.0, 0).is_err());
        assert!(NoiseSpec::new(f64::NAN, 0).is_err());
    }
}
