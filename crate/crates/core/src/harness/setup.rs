use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::operators::{compose, make_blur_operator, make_haar_operator, Boundary, Operator};
use crate::simulation::{degrade, shepp_logan_variant, DegradationSpec, ImageGrid, PhantomVariant};
use crate::solvers::Problem;

/// How the forward model `A = P W` is assembled for an image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetupParams {
    pub kernel_size: usize,
    pub boundary: Boundary,
    pub haar_levels: u32,
}

impl Default for SetupParams {
    fn default() -> Self {
        Self {
            kernel_size: 5,
            boundary: Boundary::Circular,
            haar_levels: 2,
        }
    }
}

/// A deblurring problem over Haar coefficients: `b` is the degraded image,
/// `A` is blur after wavelet synthesis.
#[derive(Debug, Clone)]
pub struct RestorationSetup {
    pub degraded: ImageGrid,
    pub blur: Operator,
    pub wavelet: Operator,
    pub problem: Problem,
}

impl RestorationSetup {
    pub fn new(degraded: ImageGrid, params: &SetupParams) -> Result<Self> {
        let (h, w) = (degraded.height(), degraded.width());
        let blur = make_blur_operator(h, w, params.kernel_size, params.boundary)?;
        let wavelet = make_haar_operator(h, w, params.haar_levels)?;
        let op = compose(blur.clone(), wavelet.clone())?;
        let problem = Problem::new(op, degraded.pixels().to_vec())?.with_synthesis(wavelet.clone())?;
        Ok(Self {
            degraded,
            blur,
            wavelet,
            problem,
        })
    }

    /// Phantom of `size × size`, degraded by `spec`, with the forward model
    /// using the same kernel and boundary as the degradation.
    pub fn phantom(
        size: usize,
        variant: PhantomVariant,
        spec: &DegradationSpec,
        haar_levels: u32,
    ) -> Result<(ImageGrid, Self)> {
        let truth = shepp_logan_variant(size, size, variant)?;
        let degraded = degrade(&truth, spec)?;
        let params = SetupParams {
            kernel_size: spec.kernel_size,
            boundary: spec.boundary,
            haar_levels,
        };
        Ok((truth, Self::new(degraded, &params)?))
    }
}
