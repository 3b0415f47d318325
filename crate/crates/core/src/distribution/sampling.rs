use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::Gwl;
use crate::estimation::LifetimeSample;

/// Logarithm of a standard gamma variate of the given shape.
///
/// Marsaglia–Tsang squeeze for `shape ≥ 1`; for `shape < 1` the variate is
/// `Gamma(shape + 1) · U^{1/shape}`, assembled in log space because for very
/// small shapes the variate itself routinely underflows.
pub fn ln_standard_gamma<R: Rng + ?Sized>(rng: &mut R, shape: f64) -> f64 {
    if shape < 1.0 {
        let u: f64 = 1.0 - rng.random::<f64>();
        return ln_standard_gamma(rng, shape + 1.0) + u.ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * z;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.random();
        let z2 = z * z;
        if u < 1.0 - 0.0331 * z2 * z2 || u.ln() < 0.5 * z2 + d * (1.0 - v + v.ln()) {
            return d.ln() + v.ln();
        }
    }
}

impl Gwl {
    /// One draw: pick the `GG(φ)` component with probability `λ/(λ+φ)`,
    /// otherwise `GG(φ+1)`, and return `G^{1/α} / λ`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let shape = if rng.random::<f64>() < self.weight { self.phi() } else { self.phi() + 1.0 };
        let ln_g = ln_standard_gamma(rng, shape);
        (ln_g / self.alpha() - self.ln_lambda).exp().clamp(f64::MIN_POSITIVE, f64::MAX)
    }

    pub fn draw_n<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }

    /// `n` independent draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> LifetimeSample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        LifetimeSample::new(self.draw_n(&mut rng, n.max(1))).expect("draws are positive and finite")
    }
}
