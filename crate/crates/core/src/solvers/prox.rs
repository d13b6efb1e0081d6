use crate::error::{Error, Result};

/// `sign(v) · max(|v| − θ, 0)`: the proximal map of `θ|·|`.
#[inline]
pub fn soft_threshold_scalar(v: f64, theta: f64) -> f64 {
    let mag = v.abs() - theta;
    if mag > 0.0 {
        mag.copysign(v)
    } else {
        0.0
    }
}

/// Elementwise soft-thresholding with per-coordinate thresholds.
pub fn soft_threshold(v: &[f64], thresholds: &[f64]) -> Result<Vec<f64>> {
    if v.len() != thresholds.len() {
        return Err(Error::invalid(format!(
            "{} values but {} thresholds",
            v.len(),
            thresholds.len()
        )));
    }
    if let Some(t) = thresholds.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::invalid(format!("threshold must be nonnegative, got {t}")));
    }
    Ok(v.iter()
        .zip(thresholds)
        .map(|(&x, &t)| soft_threshold_scalar(x, t))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shrinks_and_clamps() {
        assert_eq!(soft_threshold(&[5.0, -1.0, -7.0], &[2.0, 2.0, 2.0]).unwrap(), vec![3.0, 0.0, -5.0]);
    }

    #[test]
    fn zero_threshold_is_identity() {
        let v = [1.5, -0.25, 0.0, 1e300];
        assert_eq!(soft_threshold(&v, &[0.0; 4]).unwrap(), v);
    }

    #[test]
    fn rejects_bad_thresholds() {
        assert!(soft_threshold(&[1.0], &[-0.1]).is_err());
        assert!(soft_threshold(&[1.0], &[f64::NAN]).is_err());
        assert!(soft_threshold(&[1.0, 2.0], &[0.1]).is_err());
    }

    proptest! {
        #[test]
        fn never_grows_and_keeps_sign(v in -1e6f64..1e6, t in 0f64..1e6) {
            let out = soft_threshold_scalar(v, t);
            prop_assert!(out.abs() <= v.abs());
            prop_assert!(out == 0.0 || out.signum() == v.signum());
            prop_assert!((v - out).abs() <= t + 1e-9 * v.abs());
        }
    }
}
