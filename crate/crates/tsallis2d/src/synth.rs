//! Deterministic synthetic test images: Gaussian bimodal/trimodal scenes
//! with spatially coherent object regions, and constant fields.
//!
//! Everything is reproducible from the seed alone, across platforms and
//! languages, because the random stream is pinned down exactly:
//!
//! * PRNG: SplitMix64. State advances by `0x9E3779B97F4A7C15`; the output
//!   mix is `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//!   z *= 0x94D049BB133111EB; z ^= z >> 31` (all wrapping).
//! * Uniform draw in (0, 1]: `((x >> 11) + 1) * 2^-53`.
//! * Normal draw: Box-Muller, `z = sqrt(-2 ln u1) * cos(2 pi u2)`, exactly
//!   two uniform draws per pixel (the sine branch is discarded).
//! * Pixels are generated in row-major order; every pixel consumes two
//!   draws regardless of its class or sigma.
//! * Sample value: `clamp(round(mean + sigma * z), 0, 255)`.
//!
//! The bimodal kind places one centered disk of object pixels on a
//! background field; the disk radius is `sqrt(mix * w * h / pi)` around the
//! pixel-grid center `((w - 1) / 2, (h - 1) / 2)`, membership by
//! `dx^2 + dy^2 <= r^2`. The trimodal kind places two disks of half that
//! area at x-offsets 0.3 and 0.7 of `(w - 1)`.

use crate::error::{Error, Result};
use crate::imgio::GrayImage;

/// SplitMix64 pseudorandom generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in the half-open-from-zero interval (0, 1].
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (((self.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
    }

    /// One standard normal draw via Box-Muller (cosine branch only).
    #[inline]
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Scene layout of the generated image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    /// Background field plus one centered object disk; two means.
    Bimodal,
    /// Background plus two object disks; three means.
    Trimodal,
    /// Uniform field; one mean, sigma ignored beyond noise.
    Constant,
}

impl SynthKind {
    fn class_count(&self) -> usize {
        match self {
            SynthKind::Bimodal => 2,
            SynthKind::Trimodal => 3,
            SynthKind::Constant => 1,
        }
    }
}

/// Parameters of a synthetic image. `means[0]` is always the background
/// class; `sigmas` may hold one value (shared) or one per class. `mix` is
/// the total object area fraction and must lie in (0, 1) for the disk
/// kinds.
#[derive(Debug, Clone)]
pub struct SynthParams {
    pub kind: SynthKind,
    pub means: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub mix: f64,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
}

impl SynthParams {
    fn validate(&self) -> Result<()> {
        let classes = self.kind.class_count();
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParams(format!(
                "size must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        if self.means.len() != classes {
            return Err(Error::InvalidParams(format!(
                "{:?} needs {} means, got {}",
                self.kind,
                classes,
                self.means.len()
            )));
        }
        if self.sigmas.len() != 1 && self.sigmas.len() != classes {
            return Err(Error::InvalidParams(format!(
                "need 1 or {} sigmas, got {}",
                classes,
                self.sigmas.len()
            )));
        }
        if self.means.iter().any(|m| !m.is_finite()) {
            return Err(Error::InvalidParams("means must be finite".into()));
        }
        if self.sigmas.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidParams("sigmas must be nonnegative".into()));
        }
        if self.kind != SynthKind::Constant && !(self.mix > 0.0 && self.mix < 1.0) {
            return Err(Error::InvalidParams(format!(
                "mix must lie in (0, 1), got {}",
                self.mix
            )));
        }
        Ok(())
    }

    fn sigma(&self, class: usize) -> f64 {
        if self.sigmas.len() == 1 {
            self.sigmas[0]
        } else {
            self.sigmas[class]
        }
    }

    /// Class index of the pixel at (x, y): 0 is background, disk classes
    /// count up from 1.
    fn class_at(&self, x: usize, y: usize) -> usize {
        let (w, h) = (self.width as f64, self.height as f64);
        let cy = (h - 1.0) / 2.0;
        let dy = y as f64 - cy;
        match self.kind {
            SynthKind::Constant => 0,
            SynthKind::Bimodal => {
                let cx = (w - 1.0) / 2.0;
                let dx = x as f64 - cx;
                let r2 = self.mix * w * h / std::f64::consts::PI;
                if dx * dx + dy * dy <= r2 {
                    1
                } else {
                    0
                }
            }
            SynthKind::Trimodal => {
                let r2 = (self.mix / 2.0) * w * h / std::f64::consts::PI;
                let c1 = 0.3 * (w - 1.0);
                let c2 = 0.7 * (w - 1.0);
                let d1 = x as f64 - c1;
                let d2 = x as f64 - c2;
                if d1 * d1 + dy * dy <= r2 {
                    1
                } else if d2 * d2 + dy * dy <= r2 {
                    2
                } else {
                    0
                }
            }
        }
    }
}

/// Generates the image described by `params`, deterministically per seed.
pub fn generate_synthetic(params: &SynthParams) -> Result<GrayImage> {
    params.validate()?;
    let mut rng = SplitMix64::new(params.seed);
    let mut pixels = Vec::with_capacity(params.width * params.height);
    for y in 0..params.height {
        for x in 0..params.width {
            let class = params.class_at(x, y);
            let z = rng.next_normal();
            let value = params.means[class] + params.sigma(class) * z;
            pixels.push(value.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(params.width, params.height, pixels)
}

/// Ground-truth object mask for `params`: true where the pixel belongs to
/// an object disk. Constant scenes have no object pixels.
pub fn object_mask(params: &SynthParams) -> Result<Vec<bool>> {
    params.validate()?;
    let mut mask = Vec::with_capacity(params.width * params.height);
    for y in 0..params.height {
        for x in 0..params.width {
            mask.push(params.class_at(x, y) != 0);
        }
    }
    Ok(mask)
}
