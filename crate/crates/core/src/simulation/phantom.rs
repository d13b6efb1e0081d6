use serde::{Deserialize, Serialize};

use super::ImageGrid;
use crate::error::{Error, Result};

/// One additive ellipse of a phantom, in normalized `[-1, 1]²` coordinates
/// with `y` pointing up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub intensity: f64,
    pub semi_x: f64,
    pub semi_y: f64,
    pub center_x: f64,
    pub center_y: f64,
    pub angle_deg: f64,
}

impl Ellipse {
    const fn new(intensity: f64, semi_x: f64, semi_y: f64, center_x: f64, center_y: f64, angle_deg: f64) -> Self {
        Self {
            intensity,
            semi_x,
            semi_y,
            center_x,
            center_y,
            angle_deg,
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (s, c) = self.angle_deg.to_radians().sin_cos();
        let (dx, dy) = (x - self.center_x, y - self.center_y);
        let u = dx * c + dy * s;
        let v = dy * c - dx * s;
        (u * u) / (self.semi_x * self.semi_x) + (v * v) / (self.semi_y * self.semi_y) <= 1.0
    }
}

/// Ellipse geometry shared by both variants; intensities differ.
const GEOMETRY: [(f64, f64, f64, f64, f64); 10] = [
    (0.69, 0.92, 0.0, 0.0, 0.0),
    (0.6624, 0.874, 0.0, -0.0184, 0.0),
    (0.11, 0.31, 0.22, 0.0, -18.0),
    (0.16, 0.41, -0.22, 0.0, 18.0),
    (0.21, 0.25, 0.0, 0.35, 0.0),
    (0.046, 0.046, 0.0, 0.1, 0.0),
    (0.046, 0.046, 0.0, -0.1, 0.0),
    (0.046, 0.023, -0.08, -0.605, 0.0),
    (0.023, 0.023, 0.0, -0.606, 0.0),
    (0.023, 0.046, 0.06, -0.605, 0.0),
];

const STANDARD_INTENSITY: [f64; 10] = [1.0, -0.98, -0.02, -0.02, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01];
const MODIFIED_INTENSITY: [f64; 10] = [1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhantomVariant {
    /// Original low-contrast intensities (skull 1.0, brain 0.02).
    #[default]
    Standard,
    /// Contrast-stretched intensities (brain 0.2).
    Modified,
}

impl PhantomVariant {
    pub fn ellipses(self) -> [Ellipse; 10] {
        let intensity = match self {
            PhantomVariant::Standard => STANDARD_INTENSITY,
            PhantomVariant::Modified => MODIFIED_INTENSITY,
        };
        std::array::from_fn(|i| {
            let (a, b, x0, y0, phi) = GEOMETRY[i];
            Ellipse::new(intensity[i], a, b, x0, y0, phi)
        })
    }
}

fn axis(len: usize) -> impl Iterator<Item = f64> {
    let half = (len as f64 - 1.0) / 2.0;
    (0..len).map(move |i| (i as f64 - half) / half)
}

pub fn shepp_logan(height: usize, width: usize) -> Result<ImageGrid> {
    shepp_logan_variant(height, width, PhantomVariant::Standard)
}

/// Renders the ten-ellipse Shepp-Logan head phantom by summing ellipse
/// intensities at pixel centers. The top row is `y = +1`.
pub fn shepp_logan_variant(height: usize, width: usize, variant: PhantomVariant) -> Result<ImageGrid> {
    if height < 16 || width < 16 {
        return Err(Error::invalid(format!(
            "phantom needs at least 16x16 pixels, got {height}x{width}"
        )));
    }
    let ellipses = variant.ellipses();
    let xs: Vec<f64> = axis(width).collect();
    let mut pixels = Vec::with_capacity(height * width);
    for y in axis(height).map(|v| -v) {
        for &x in &xs {
            let v: f64 = ellipses
                .iter()
                .filter(|e| e.contains(x, y))
                .map(|e| e.intensity)
                .sum();
            // Cancelling intensities can leave ±1e-17 residue.
            pixels.push(if v.abs() < 1e-12 { 0.0 } else { v });
        }
    }
    ImageGrid::new(height, width, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_grids() {
        assert!(shepp_logan(8, 64).is_err());
        assert!(shepp_logan(16, 16).is_ok());
    }

    #[test]
    fn background_corner_is_zero_and_skull_is_one() {
        let img = shepp_logan(64, 64).unwrap();
        assert_eq!(img.get(0, 0), 0.0);
        assert_eq!(img.get(63, 63), 0.0);
        // just inside the skull, on the vertical axis near the top
        let top = (0..64).find(|&r| img.get(r, 32) != 0.0).unwrap();
        assert!((img.get(top, 32) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn values_stay_in_unit_range() {
        for variant in [PhantomVariant::Standard, PhantomVariant::Modified] {
            let img = shepp_logan_variant(96, 80, variant).unwrap();
            let (lo, hi) = img.value_range();
            assert!(lo >= 0.0 && hi <= 1.0 + 1e-12, "{variant:?}: {lo} {hi}");
        }
    }

    #[test]
    fn center_is_brain_tissue() {
        let img = shepp_logan(128, 128).unwrap();
        let v = img.get(64, 64);
        assert!((v - 0.02).abs() < 1e-12 || (v - 0.03).abs() < 1e-12, "{v}");
    }
}
