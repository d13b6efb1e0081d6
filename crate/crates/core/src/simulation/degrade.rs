use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::ImageGrid;
use crate::error::{Error, Result};
use crate::operators::{make_blur_operator, Boundary};

/// Uniform blur followed by additive white Gaussian noise.
///
/// Noise is drawn from `ChaCha8Rng::seed_from_u64(seed)`, one sample per
/// pixel in row-major order, so a given seed always produces the same
/// noise field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegradationSpec {
    pub kernel_size: usize,
    pub boundary: Boundary,
    /// Absolute standard deviation of the noise.
    pub sigma: f64,
    pub seed: u64,
}

impl Default for DegradationSpec {
    fn default() -> Self {
        Self {
            kernel_size: 5,
            boundary: Boundary::Circular,
            sigma: 1e-2,
            seed: 0,
        }
    }
}

impl DegradationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.kernel_size == 0 || self.kernel_size.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "kernel size must be odd and positive, got {}",
                self.kernel_size
            )));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid(format!("sigma must be nonnegative, got {}", self.sigma)));
        }
        Ok(())
    }
}

pub fn degrade(image: &ImageGrid, spec: &DegradationSpec) -> Result<ImageGrid> {
    spec.validate()?;
    let blur = make_blur_operator(image.height(), image.width(), spec.kernel_size, spec.boundary)?;
    let mut pixels = blur.forward(image.pixels())?;
    if spec.sigma > 0.0 {
        let normal = Normal::new(0.0, spec.sigma)
            .map_err(|e| Error::invalid(format!("bad noise level: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for p in &mut pixels {
            *p += normal.sample(&mut rng);
        }
    }
    ImageGrid::new(image.height(), image.width(), pixels)
}
