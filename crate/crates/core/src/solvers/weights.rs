use serde::{Deserialize, Serialize};

use super::config::{SolverConfig, Strategy};
use crate::error::{Error, Result};
use crate::signal::compensated_sum;

/// Nonnegative per-coordinate penalty weights.
///
/// `normalized` marks weights that live on the probability simplex; those
/// carry the entropy term in the cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<f64>,
    normalized: bool,
}

impl WeightVector {
    /// Unnormalized weights, e.g. from a baseline rule.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::invalid(format!("weights must be finite and nonnegative, got {w}")));
        }
        Ok(Self {
            weights,
            normalized: false,
        })
    }

    /// `1/n` everywhere.
    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![1.0 / n as f64; n],
            normalized: true,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `Σ wᵢ ln wᵢ`, with `0 ln 0 = 0`.
    pub fn neg_entropy(&self) -> f64 {
        compensated_sum(
            self.weights
                .iter()
                .map(|&w| if w > 0.0 { w * w.ln() } else { 0.0 }),
        )
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.weights
    }
}

fn magnitudes(x: &[f64]) -> Result<impl Iterator<Item = f64> + '_> {
    if x.is_empty() {
        return Err(Error::invalid("weights need at least one coordinate"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("coefficients must be finite"));
    }
    Ok(x.iter().map(|v| v.abs()))
}

/// Minimizer of `Σ wᵢ|xᵢ| + γ Σ wᵢ ln wᵢ` over the probability simplex:
/// `wᵢ = exp(−|xᵢ|/γ) / Σₗ exp(−|xₗ|/γ)`.
///
/// Exponents are shifted by `minᵢ |xᵢ|` so the largest term is exactly one
/// and nothing overflows; terms far above the minimum underflow to zero.
pub fn entropy_weights(x: &[f64], gamma: f64) -> Result<WeightVector> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma must be positive and finite, got {gamma}")));
    }
    let min = magnitudes(x)?.fold(f64::INFINITY, f64::min);
    let unnorm: Vec<f64> = magnitudes(x)?.map(|a| (-(a - min) / gamma).exp()).collect();
    let total = compensated_sum(unnorm.iter().copied());
    Ok(WeightVector {
        weights: unnorm.into_iter().map(|e| e / total).collect(),
        normalized: true,
    })
}

/// The fixed or reweighting rules of the baseline methods. The weights are
/// returned unnormalized, exactly as the rules define them.
pub fn baseline_weights(x: &[f64], strategy: Strategy, delta: f64, p: f64) -> Result<WeightVector> {
    if strategy.uses_delta() && !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    if strategy.uses_p() && !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("p must lie in (0, 1), got {p}")));
    }
    let mags = magnitudes(x)?;
    let weights: Vec<f64> = match strategy {
        Strategy::Ista => mags.map(|_| 1.0).collect(),
        Strategy::Irl1 => mags.map(|a| 1.0 / (a + delta)).collect(),
        Strategy::Wlp => mags.map(|a| (a + delta).powf(p - 1.0)).collect(),
        Strategy::Nw4 => mags.map(|a| 1.0 / (1.0 + (a + delta).powf(p + 1.0))).collect(),
        Strategy::Eriwsta => {
            return Err(Error::invalid(
                "eriwsta is not a baseline rule; use entropy_weights",
            ))
        }
    };
    WeightVector::new(weights)
}

/// Weights for whichever strategy `config` selects.
pub fn strategy_weights(x: &[f64], config: &SolverConfig) -> Result<WeightVector> {
    match config.strategy {
        Strategy::Eriwsta => entropy_weights(x, config.gamma),
        s => baseline_weights(x, s, config.delta, config.p),
    }
}
