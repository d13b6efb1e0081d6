use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use super::{LinearOperator, Operator};
use crate::error::{Error, Result};

/// Orthonormal multi-level 2D Haar synthesis: wavelet coefficients → image.
///
/// Coefficients use the usual Mallat layout. At each level the current
/// top-left block of size `(h / 2^l) × (w / 2^l)` is split into averages
/// (first half) and differences (second half), first along rows and then
/// along columns, so the coarsest scaling coefficients end up in the
/// top-left corner. The adjoint is the analysis transform; since the
/// transform is orthonormal it is also the inverse.
#[derive(Debug, Clone)]
pub struct HaarSynthesis {
    height: usize,
    width: usize,
    levels: u32,
}

impl HaarSynthesis {
    pub fn new(height: usize, width: usize, levels: u32) -> Result<Self> {
        if levels == 0 {
            return Err(Error::invalid("Haar transform needs at least one level"));
        }
        let block = 1usize
            .checked_shl(levels)
            .filter(|_| levels < usize::BITS)
            .ok_or_else(|| Error::invalid(format!("{levels} Haar levels is too many")))?;
        if height == 0 || width == 0 || !height.is_multiple_of(block) || !width.is_multiple_of(block) {
            return Err(Error::invalid(format!(
                "image {height}x{width} is not divisible by 2^{levels}"
            )));
        }
        if height.checked_mul(width).is_none() {
            return Err(Error::invalid("image dimensions overflow"));
        }
        Ok(Self {
            height,
            width,
            levels,
        })
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// One analysis level on the top-left `h × w` block of `buf`.
    fn analyze_level(&self, buf: &mut [f64], h: usize, w: usize, line: &mut Vec<f64>) {
        let stride = self.width;
        let (hw, hh) = (w / 2, h / 2);
        for r in 0..h {
            line.clear();
            line.extend_from_slice(&buf[r * stride..r * stride + w]);
            for i in 0..hw {
                let (a, b) = (line[2 * i], line[2 * i + 1]);
                buf[r * stride + i] = (a + b) * FRAC_1_SQRT_2;
                buf[r * stride + hw + i] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        for c in 0..w {
            line.clear();
            line.extend((0..h).map(|r| buf[r * stride + c]));
            for i in 0..hh {
                let (a, b) = (line[2 * i], line[2 * i + 1]);
                buf[i * stride + c] = (a + b) * FRAC_1_SQRT_2;
                buf[(hh + i) * stride + c] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    /// Inverse of [`Self::analyze_level`].
    fn synthesize_level(&self, buf: &mut [f64], h: usize, w: usize, line: &mut Vec<f64>) {
        let stride = self.width;
        let (hw, hh) = (w / 2, h / 2);
        for c in 0..w {
            line.clear();
            line.extend((0..h).map(|r| buf[r * stride + c]));
            for i in 0..hh {
                let (a, d) = (line[i], line[hh + i]);
                buf[2 * i * stride + c] = (a + d) * FRAC_1_SQRT_2;
                buf[(2 * i + 1) * stride + c] = (a - d) * FRAC_1_SQRT_2;
            }
        }
        for r in 0..h {
            line.clear();
            line.extend_from_slice(&buf[r * stride..r * stride + w]);
            for i in 0..hw {
                let (a, d) = (line[i], line[hw + i]);
                buf[r * stride + 2 * i] = (a + d) * FRAC_1_SQRT_2;
                buf[r * stride + 2 * i + 1] = (a - d) * FRAC_1_SQRT_2;
            }
        }
    }
}

impl LinearOperator for HaarSynthesis {
    fn in_dim(&self) -> usize {
        self.height * self.width
    }

    fn out_dim(&self) -> usize {
        self.height * self.width
    }

    fn forward_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
        let mut line = Vec::with_capacity(self.height.max(self.width));
        for l in (0..self.levels).rev() {
            self.synthesize_level(y, self.height >> l, self.width >> l, &mut line);
        }
    }

    fn adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        x.copy_from_slice(y);
        let mut line = Vec::with_capacity(self.height.max(self.width));
        for l in 0..self.levels {
            self.analyze_level(x, self.height >> l, self.width >> l, &mut line);
        }
    }
}

/// Returns the synthesis operator `W`; `W.adjoint` is the analysis transform.
pub fn make_haar_operator(height: usize, width: usize, levels: u32) -> Result<Operator> {
    Ok(Arc::new(HaarSynthesis::new(height, width, levels)?))
}
