use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::LinearOperator;
use crate::signal::compensated_sum;
use crate::simulation::ImageGrid;
use crate::solvers::IterationTrace;

/// Mean absolute pixel error, `(1/N) Σ |restoredᵢ − truthᵢ|`.
pub fn mae(restored: &ImageGrid, truth: &ImageGrid) -> Result<f64> {
    if !restored.same_shape(truth) {
        return Err(Error::invalid(format!(
            "cannot compare {}x{} with {}x{}",
            restored.height(),
            restored.width(),
            truth.height(),
            truth.width()
        )));
    }
    let n = restored.len() as f64;
    Ok(compensated_sum(
        restored
            .pixels()
            .iter()
            .zip(truth.pixels())
            .map(|(a, b)| (a - b).abs()),
    ) / n)
}

/// Synthesizes an image from coefficients, `W x`, shaped like `like`.
pub fn restore_image(
    coeffs: &[f64],
    synthesis: &dyn LinearOperator,
    height: usize,
    width: usize,
) -> Result<ImageGrid> {
    if synthesis.out_dim() != height * width {
        return Err(Error::invalid(format!(
            "synthesis produces {} pixels, expected {height}x{width}",
            synthesis.out_dim()
        )));
    }
    ImageGrid::new(height, width, synthesis.forward(coeffs)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profiles {
    pub central_row: Vec<f64>,
    pub central_col: Vec<f64>,
}

/// Row `⌊h/2⌋` and column `⌊w/2⌋`.
pub fn extract_profiles(image: &ImageGrid) -> Profiles {
    let (r, c) = (image.height() / 2, image.width() / 2);
    Profiles {
        central_row: image.row(r).to_vec(),
        central_col: (0..image.height()).map(|i| image.get(i, c)).collect(),
    }
}

/// First recorded iteration whose cost lies within `frac · |final|` of the
/// final recorded cost.
pub fn iterations_to_within(trace: &IterationTrace, frac: f64) -> Option<usize> {
    let last = trace.last()?.cost;
    let tol = frac * last.abs();
    trace
        .records()
        .iter()
        .find(|r| (r.cost - last).abs() <= tol)
        .map(|r| r.iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Identity;

    fn img(h: usize, w: usize, px: &[f64]) -> ImageGrid {
        ImageGrid::new(h, w, px.to_vec()).unwrap()
    }

    #[test]
    fn mae_basic_cases() {
        let a = img(2, 1, &[0.0, 0.0]);
        let b = img(2, 1, &[1.0, -3.0]);
        assert_eq!(mae(&a, &b).unwrap(), 2.0);
        assert_eq!(mae(&b, &b).unwrap(), 0.0);
        let shifted = img(2, 1, &[1.25, -2.75]);
        assert!((mae(&shifted, &b).unwrap() - 0.25).abs() < 1e-15);
        assert!(mae(&a, &img(1, 2, &[0.0, 0.0])).is_err());
    }

    #[test]
    fn profiles_pick_middle_lines() {
        let image = img(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        let p = extract_profiles(&image);
        assert_eq!(p.central_row, vec![4.0, 5.0, 6.0]);
        assert_eq!(p.central_col, vec![2.0, 5.0, 8.0]);

        let flat = ImageGrid::filled(4, 6, 0.5).unwrap();
        let p = extract_profiles(&flat);
        assert_eq!(p.central_row, vec![0.5; 6]);
        assert_eq!(p.central_col, vec![0.5; 4]);
    }

    #[test]
    fn restore_checks_shape() {
        let op = Identity::new(4);
        assert!(restore_image(&[0.0; 4], &op, 2, 3).is_err());
        let zero = restore_image(&[0.0; 4], &op, 2, 2).unwrap();
        assert_eq!(zero.pixels(), &[0.0; 4]);
    }

    #[test]
    fn settle_iteration() {
        use crate::solvers::TraceRecord;
        let mut t = IterationTrace::default();
        for (i, c) in [10.0, 5.0, 2.05, 2.01, 2.0].into_iter().enumerate() {
            t.push(TraceRecord { iter: i + 1, cost: c, fidelity: c, mae: None, wall_ms: 0.0 });
        }
        assert_eq!(iterations_to_within(&t, 0.05), Some(3));
        assert_eq!(iterations_to_within(&IterationTrace::default(), 0.05), None);
    }
}
