//! Initial data families: Gaussians, sech² profiles and seeded random
//! Schwartz-class fields (band-limited noise under a Gaussian envelope).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::spectral::{Grid, RealField};
use crate::Result;

/// `a·exp(−(x−c)²/σ²)`
pub fn gaussian(grid: &Grid, amplitude: f64, width: f64, center: f64) -> Result<RealField> {
    RealField::from_fn(grid, |x| {
        let s = (x - center) / width;
        amplitude * (-s * s).exp()
    })
}

/// `a·sech²(b(x−c))`
pub fn sech2(grid: &Grid, amplitude: f64, rate: f64, center: f64) -> Result<RealField> {
    RealField::from_fn(grid, |x| {
        let c = (rate * (x - center)).cosh();
        amplitude / (c * c)
    })
}

/// Random field `envelope(x)·Σ a_m cos(κ_m x + θ_m)` drawn from `rng`,
/// rescaled so that `max |u| = amplitude`.
pub fn random_schwartz_with(grid: &Grid, rng: &mut ChaCha8Rng, amplitude: f64) -> Result<RealField> {
    const MODES: usize = 6;
    let width = rng.gen_range(4.0..8.0);
    let center = rng.gen_range(-10.0..10.0);
    let terms: Vec<(f64, f64, f64)> = (0..MODES)
        .map(|m| {
            let a = rng.gen_range(-1.0..1.0) / (1.0 + m as f64);
            let kappa = 0.5 * m as f64 / MODES as f64;
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            (a, kappa, theta)
        })
        .collect();
    let raw = RealField::from_fn(grid, |x| {
        let s = (x - center) / width;
        let band: f64 = terms.iter().map(|&(a, k, th)| a * (k * x + th).cos()).sum();
        (-s * s).exp() * band
    })?;
    let peak = raw.max_abs();
    if peak == 0.0 {
        return Ok(raw);
    }
    Ok(raw.scale(amplitude / peak))
}

pub fn random_schwartz(grid: &Grid, seed: u64, amplitude: f64) -> Result<RealField> {
    random_schwartz_with(grid, &mut ChaCha8Rng::seed_from_u64(seed), amplitude)
}

/// `count` draws from one seeded stream, amplitudes uniform in `[0.2, 1]`.
pub fn random_family(grid: &Grid, seed: u64, count: usize) -> Result<Vec<RealField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let amp = rng.gen_range(0.2..1.0);
            random_schwartz_with(grid, &mut rng, amp)
        })
        .collect()
}

/// Serializable description of initial data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Gaussian {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default = "default_width")]
        width: f64,
        #[serde(default)]
        center: f64,
    },
    Sech2 {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default = "default_rate")]
        rate: f64,
        #[serde(default)]
        center: f64,
    },
    RandomSchwartz {
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
}

fn default_amplitude() -> f64 {
    1.0
}

fn default_width() -> f64 {
    6.0
}

fn default_rate() -> f64 {
    0.2
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec::Gaussian { amplitude: default_amplitude(), width: default_width(), center: 0.0 }
    }
}

impl DataSpec {
    /// Sample on `grid`; `seed` only matters for the random family.
    pub fn build(&self, grid: &Grid, seed: u64) -> Result<RealField> {
        match *self {
            DataSpec::Gaussian { amplitude, width, center } => gaussian(grid, amplitude, width, center),
            DataSpec::Sech2 { amplitude, rate, center } => sech2(grid, amplitude, rate, center),
            DataSpec::RandomSchwartz { amplitude } => random_schwartz(grid, seed, amplitude),
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            DataSpec::Gaussian { amplitude, .. }
            | DataSpec::Sech2 { amplitude, .. }
            | DataSpec::RandomSchwartz { amplitude } => amplitude,
        }
    }

    pub fn with_amplitude(&self, amplitude: f64) -> DataSpec {
        let mut out = self.clone();
        match &mut out {
            DataSpec::Gaussian { amplitude: a, .. }
            | DataSpec::Sech2 { amplitude: a, .. }
            | DataSpec::RandomSchwartz { amplitude: a } => *a = amplitude,
        }
        out
    }
}
