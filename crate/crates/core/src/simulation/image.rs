use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::all_finite;

/// Row-major grayscale image with finite pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageGrid {
    height: usize,
    width: usize,
    pixels: Vec<f64>,
}

impl ImageGrid {
    pub fn new(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid(format!("image must be non-empty, got {height}x{width}")));
        }
        if height.checked_mul(width) != Some(pixels.len()) {
            return Err(Error::invalid(format!(
                "{height}x{width} image given {} pixels",
                pixels.len()
            )));
        }
        if !all_finite(&pixels) {
            return Err(Error::invalid("image contains non-finite pixels"));
        }
        Ok(Self {
            height,
            width,
            pixels,
        })
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self> {
        let n = height
            .checked_mul(width)
            .ok_or_else(|| Error::invalid("image dimensions overflow"))?;
        Self::new(height, width, vec![value; n])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.pixels[row * self.width..(row + 1) * self.width]
    }

    /// `(min, max)` over all pixels.
    pub fn value_range(&self) -> (f64, f64) {
        self.pixels
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub fn same_shape(&self, other: &ImageGrid) -> bool {
        self.height == other.height && self.width == other.width
    }
}
