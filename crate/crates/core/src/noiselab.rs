//! Seeded salt & pepper, Gaussian and speckle noise.
//!
//! Every model draws from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `SeedableRng::seed_from_u64(seed)`. Uniform variates are the top 53 bits of
//! `next_u64` scaled by 2^-53, giving values in `[0, 1)`. Normal variates use
//! the Marsaglia polar method: draw `u, v` uniform in `(-1, 1)` until
//! `0 < s = u² + v² < 1`, then emit `u·f` and cache `v·f` for the next call,
//! with `f = sqrt(-2 ln s / s)`.
//!
//! Pixels are visited in row-major order, one stream for the whole image.
//! Salt & pepper draws one uniform per pixel to decide corruption, and one
//! more per corrupted pixel: below 0.5 gives 0 (pepper), otherwise 255 (salt).
//! Gaussian and speckle draw one normal per pixel.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::image::GrayImage;

pub const DEFAULT_DENSITY: f64 = 0.05;
pub const DEFAULT_SIGMA: f64 = 25.5;
pub const DEFAULT_VARIANCE: f64 = 0.04;
pub const DEFAULT_SEED: u64 = 42;

/// Seeded uniform and standard-normal source.
pub struct NoiseRng {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl NoiseRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseKind {
    SaltPepper,
    Gaussian,
    Speckle,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 3] = [NoiseKind::SaltPepper, NoiseKind::Gaussian, NoiseKind::Speckle];

    pub fn as_str(self) -> &'static str {
        match self {
            NoiseKind::SaltPepper => "salt-pepper",
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::Speckle => "speckle",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "salt-pepper" | "salt_pepper" | "sp" => Ok(NoiseKind::SaltPepper),
            "gaussian" => Ok(NoiseKind::Gaussian),
            "speckle" => Ok(NoiseKind::Speckle),
            other => Err(format!("unknown noise kind {other:?}")),
        }
    }
}

/// Noise model with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    /// Fraction of pixels replaced by 0 or 255.
    SaltPepper { density: f64 },
    /// Additive normal noise, std-dev on the `[0, 255]` scale.
    Gaussian { sigma: f64 },
    /// Multiplicative normal noise, unitless variance.
    Speckle { variance: f64 },
}

impl Noise {
    pub fn kind(&self) -> NoiseKind {
        match self {
            Noise::SaltPepper { .. } => NoiseKind::SaltPepper,
            Noise::Gaussian { .. } => NoiseKind::Gaussian,
            Noise::Speckle { .. } => NoiseKind::Speckle,
        }
    }

    /// The model with its default parameter.
    pub fn default_for(kind: NoiseKind) -> Self {
        match kind {
            NoiseKind::SaltPepper => Noise::SaltPepper {
                density: DEFAULT_DENSITY,
            },
            NoiseKind::Gaussian => Noise::Gaussian {
                sigma: DEFAULT_SIGMA,
            },
            NoiseKind::Speckle => Noise::Speckle {
                variance: DEFAULT_VARIANCE,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Noise::SaltPepper { density } if !(0.0..=1.0).contains(&density) => Err(
                Error::Parameter(format!("density {density} outside [0, 1]")),
            ),
            Noise::Gaussian { sigma } if !(sigma >= 0.0 && sigma.is_finite()) => {
                Err(Error::Parameter(format!("sigma {sigma} must be >= 0")))
            }
            Noise::Speckle { variance } if !(variance >= 0.0 && variance.is_finite()) => {
                Err(Error::Parameter(format!("variance {variance} must be >= 0")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub noise: Noise,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(noise: Noise, seed: u64) -> Self {
        Self { noise, seed }
    }

    pub fn apply(&self, img: &GrayImage) -> Result<GrayImage> {
        match self.noise {
            Noise::SaltPepper { density } => add_salt_pepper(img, density, self.seed),
            Noise::Gaussian { sigma } => add_gaussian(img, sigma, self.seed),
            Noise::Speckle { variance } => add_speckle(img, variance, self.seed),
        }
    }
}

pub fn add_salt_pepper(img: &GrayImage, density: f64, seed: u64) -> Result<GrayImage> {
    Noise::SaltPepper { density }.validate()?;
    let mut rng = NoiseRng::new(seed);
    Ok(img.map(|v| {
        if rng.uniform() < density {
            if rng.uniform() < 0.5 {
                0.0
            } else {
                255.0
            }
        } else {
            v
        }
    }))
}

pub fn add_gaussian(img: &GrayImage, sigma: f64, seed: u64) -> Result<GrayImage> {
    Noise::Gaussian { sigma }.validate()?;
    let mut rng = NoiseRng::new(seed);
    Ok(img.map(|v| v + sigma * rng.normal()))
}

pub fn add_speckle(img: &GrayImage, variance: f64, seed: u64) -> Result<GrayImage> {
    Noise::Speckle { variance }.validate()?;
    let sd = variance.sqrt();
    let mut rng = NoiseRng::new(seed);
    Ok(img.map(|v| v + v * sd * rng.normal()))
}
