use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{LinearOperator, Operator};
use crate::error::{Error, Result};

/// How the blur kernel reads pixels outside the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    ZeroPad,
    Replicate,
    #[default]
    Circular,
}

impl Boundary {
    /// Maps a possibly out-of-range index onto the line, or `None` when the
    /// tap reads an implicit zero.
    #[inline]
    fn map(self, idx: isize, len: usize) -> Option<usize> {
        let n = len as isize;
        match self {
            Boundary::ZeroPad => (0..n).contains(&idx).then_some(idx as usize),
            Boundary::Replicate => Some(idx.clamp(0, n - 1) as usize),
            Boundary::Circular => Some(idx.rem_euclid(n) as usize),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::ZeroPad => "zero_pad",
            Boundary::Replicate => "replicate",
            Boundary::Circular => "circular",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero_pad" | "zero" => Ok(Boundary::ZeroPad),
            "replicate" => Ok(Boundary::Replicate),
            "circular" | "periodic" => Ok(Boundary::Circular),
            other => Err(Error::invalid(format!("unknown boundary '{other}'"))),
        }
    }
}

/// 2D correlation with a `k × k` uniform kernel (every tap `1/k²`) on a
/// row-major `height × width` image.
///
/// The uniform kernel is separable, so the operator is applied as a row pass
/// followed by a column pass, each a 1D box average of width `k`. Boundary
/// handling is per axis, which matches the 2D rule for all three modes.
#[derive(Debug, Clone)]
pub struct BlurOperator {
    height: usize,
    width: usize,
    kernel_size: usize,
    boundary: Boundary,
}

#[derive(Clone, Copy)]
enum Axis {
    Rows,
    Cols,
}

impl BlurOperator {
    pub fn new(height: usize, width: usize, kernel_size: usize, boundary: Boundary) -> Result<Self> {
        if kernel_size == 0 || kernel_size.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "kernel size must be odd and positive, got {kernel_size}"
            )));
        }
        if height < kernel_size || width < kernel_size {
            return Err(Error::invalid(format!(
                "image {height}x{width} is smaller than the {kernel_size}x{kernel_size} kernel"
            )));
        }
        if height.checked_mul(width).is_none() || height > isize::MAX as usize / 2 || width > isize::MAX as usize / 2 {
            return Err(Error::invalid("image dimensions overflow"));
        }
        Ok(Self {
            height,
            width,
            kernel_size,
            boundary,
        })
    }

    pub fn kernel_size(&self) -> usize {
        self.kernel_size
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    fn pass(&self, src: &[f64], dst: &mut [f64], axis: Axis, adjoint: bool) {
        let (lines, len, line_step, elem_step) = match axis {
            Axis::Rows => (self.height, self.width, self.width, 1),
            Axis::Cols => (self.width, self.height, 1, self.width),
        };
        let radius = (self.kernel_size / 2) as isize;
        let tap = 1.0 / self.kernel_size as f64;

        if adjoint {
            dst.fill(0.0);
        }
        for line in 0..lines {
            let base = line * line_step;
            for i in 0..len {
                let out = base + i * elem_step;
                if adjoint {
                    let v = src[out] * tap;
                    for d in -radius..=radius {
                        if let Some(j) = self.boundary.map(i as isize + d, len) {
                            dst[base + j * elem_step] += v;
                        }
                    }
                } else {
                    let mut acc = 0.0;
                    for d in -radius..=radius {
                        if let Some(j) = self.boundary.map(i as isize + d, len) {
                            acc += src[base + j * elem_step];
                        }
                    }
                    dst[out] = acc * tap;
                }
            }
        }
    }
}

impl LinearOperator for BlurOperator {
    fn in_dim(&self) -> usize {
        self.height * self.width
    }

    fn out_dim(&self) -> usize {
        self.height * self.width
    }

    fn forward_into(&self, x: &[f64], y: &mut [f64]) {
        if self.kernel_size == 1 {
            y.copy_from_slice(x);
            return;
        }
        let mut mid = vec![0.0; x.len()];
        self.pass(x, &mut mid, Axis::Rows, false);
        self.pass(&mid, y, Axis::Cols, false);
    }

    fn adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        if self.kernel_size == 1 {
            x.copy_from_slice(y);
            return;
        }
        let mut mid = vec![0.0; y.len()];
        self.pass(y, &mut mid, Axis::Cols, true);
        self.pass(&mid, x, Axis::Rows, true);
    }
}

pub fn make_blur_operator(
    height: usize,
    width: usize,
    kernel_size: usize,
    boundary: Boundary,
) -> Result<Operator> {
    Ok(Arc::new(BlurOperator::new(height, width, kernel_size, boundary)?))
}
