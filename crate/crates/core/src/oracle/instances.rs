//! Seeded noisy instances `d_i = |X - Z_i| + e_i`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::geometry::Point2;
use crate::objective::SensorConfig;
use crate::scalar::Scalar;

/// Distribution of the additive range noise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseSpec {
    None,
    /// Uniform on `[-a, a]`.
    Uniform { a: f64 },
    /// Zero-mean normal with standard deviation `sigma`.
    Normal { sigma: f64 },
}

/// Draws per range before giving up on a nonnegative value.
pub const MAX_NOISE_ATTEMPTS: usize = 100;

enum Sampler {
    Zero,
    Uniform(Uniform<f64>),
    Normal(Normal<f64>),
}

impl Sampler {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Sampler::Zero => 0.0,
            Sampler::Uniform(u) => u.sample(rng),
            Sampler::Normal(n) => n.sample(rng),
        }
    }
}

/// Ranges from `source` to `sensors` with i.i.d. noise, deterministic in `seed`.
pub fn generate_instance<T: Scalar>(
    source: Point2<T>,
    sensors: [Point2<T>; 3],
    noise: NoiseSpec,
    seed: u64,
) -> Result<SensorConfig<T>> {
    let sampler = match noise {
        NoiseSpec::None => Sampler::Zero,
        NoiseSpec::Uniform { a } if a == 0.0 => Sampler::Zero,
        NoiseSpec::Uniform { a } if a.is_finite() && a > 0.0 => Sampler::Uniform(Uniform::new_inclusive(-a, a)),
        NoiseSpec::Normal { sigma } if sigma == 0.0 => Sampler::Zero,
        NoiseSpec::Normal { sigma } if sigma.is_finite() && sigma > 0.0 => {
            Sampler::Normal(Normal::new(0.0, sigma).map_err(|e| precondition(e.to_string()))?)
        }
        _ => return Err(precondition("noise scale must be finite and nonnegative")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranges = [T::zero(); 3];
    for (j, z) in sensors.iter().enumerate() {
        let exact = source.dist(*z).as_f64();
        let mut attempt = 0;
        ranges[j] = loop {
            if attempt == MAX_NOISE_ATTEMPTS {
                return Err(Error::NoiseRejection(MAX_NOISE_ATTEMPTS));
            }
            attempt += 1;
            let d = exact + sampler.draw(&mut rng);
            if d >= 0.0 {
                break T::lit(d);
            }
        };
    }
    SensorConfig::new(sensors, ranges)
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point2<f64>;

    fn sensors() -> [P; 3] {
        [P::new(-1.0, 0.0), P::new(1.0, 0.0), P::new(0.0, 3f64.sqrt())]
    }

    #[test]
    fn noiseless_is_exact() {
        let x = P::new(0.2, 0.4);
        let cfg = generate_instance(x, sensors(), NoiseSpec::None, 1).unwrap();
        assert!(cfg.value(x) < 1e-15);
    }

    #[test]
    fn deterministic_per_seed() {
        let x = P::new(0.2, 0.4);
        let a = generate_instance(x, sensors(), NoiseSpec::Normal { sigma: 0.1 }, 42).unwrap();
        let b = generate_instance(x, sensors(), NoiseSpec::Normal { sigma: 0.1 }, 42).unwrap();
        let c = generate_instance(x, sensors(), NoiseSpec::Normal { sigma: 0.1 }, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_noise_in_range() {
        let x = P::new(0.1, 0.5);
        for seed in 0..200 {
            let cfg = generate_instance(x, sensors(), NoiseSpec::Uniform { a: 0.1 }, seed).unwrap();
            for j in 0..3 {
                assert!((cfg.ranges[j] - x.dist(cfg.sensors[j])).abs() <= 0.1 + 1e-12);
            }
        }
    }

    #[test]
    fn negative_draws_are_resampled() {
        let z = sensors();
        for seed in 0..50 {
            let cfg = generate_instance(z[0], z, NoiseSpec::Uniform { a: 0.5 }, seed).unwrap();
            assert!(cfg.ranges.iter().all(|d| *d >= 0.0));
        }
        let err = generate_instance(z[0], z, NoiseSpec::Normal { sigma: -1.0 }, 3);
        assert!(matches!(err, Err(Error::PreconditionViolation(_))));
    }
}
