use serde::{Deserialize, Serialize};

use super::iwsta::Problem;
use super::weights::WeightVector;
use crate::error::{Error, Result};
use crate::signal::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub total: f64,
    /// `½‖Ax − b‖²`
    pub fidelity: f64,
    /// `Σ wᵢ|xᵢ|`, plus `γ Σ wᵢ ln wᵢ` for simplex weights.
    pub penalty: f64,
}

/// `½‖Ax − b‖² + β (Σ wᵢ|xᵢ| + γ Σ wᵢ ln wᵢ)`.
///
/// The entropy term is only present for normalized weights; for baseline
/// (unnormalized) weights this is the plain weighted-L1 objective and
/// `gamma` is ignored.
pub fn evaluate_cost(
    x: &[f64],
    w: &WeightVector,
    problem: &Problem,
    beta: f64,
    gamma: f64,
) -> Result<CostBreakdown> {
    if w.len() != x.len() {
        return Err(Error::invalid(format!(
            "{} weights for {} coefficients",
            w.len(),
            x.len()
        )));
    }
    let fidelity = problem.data_fidelity(x)?;
    let l1 = compensated_sum(x.iter().zip(w.as_slice()).map(|(xi, wi)| wi * xi.abs()));
    let penalty = if w.is_normalized() {
        l1 + gamma * w.neg_entropy()
    } else {
        l1
    };
    Ok(CostBreakdown {
        total: fidelity + beta * penalty,
        fidelity,
        penalty,
    })
}
