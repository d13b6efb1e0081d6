use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{Init, SolverConfig};
use super::cost::evaluate_cost;
use super::prox::soft_threshold_scalar;
use super::weights::{strategy_weights, WeightVector};
use crate::error::{Error, Result};
use crate::operators::{check_len, estimate_spectral_bound, Operator};
use crate::signal::{all_finite, compensated_sum, norm2};

/// `min ½‖Ax − b‖² + penalty`, plus an optional synthesis map that turns
/// the unknowns into an image for error measurement.
#[derive(Debug, Clone)]
pub struct Problem {
    op: Operator,
    b: Vec<f64>,
    synthesis: Option<Operator>,
    lipschitz: Option<f64>,
}

impl Problem {
    pub fn new(op: Operator, b: Vec<f64>) -> Result<Self> {
        check_len("observation", b.len(), op.out_dim())?;
        if !all_finite(&b) {
            return Err(Error::invalid("observation contains non-finite values"));
        }
        Ok(Self {
            op,
            b,
            synthesis: None,
            lipschitz: None,
        })
    }

    /// Maps coefficients to the domain where error is measured (e.g. wavelet
    /// synthesis). Without one, coefficients are compared directly.
    pub fn with_synthesis(mut self, synthesis: Operator) -> Result<Self> {
        check_len("synthesis input", synthesis.in_dim(), self.op.in_dim())?;
        self.synthesis = Some(synthesis);
        Ok(self)
    }

    /// Fixes the step constant instead of estimating it per solve.
    pub fn with_lipschitz(mut self, lipschitz: f64) -> Result<Self> {
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::invalid(format!("Lipschitz constant must be positive, got {lipschitz}")));
        }
        self.lipschitz = Some(lipschitz);
        Ok(self)
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn observation(&self) -> &[f64] {
        &self.b
    }

    pub fn synthesis(&self) -> Option<&Operator> {
        self.synthesis.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.op.in_dim()
    }

    /// Length of the vectors [`Self::to_image`] produces.
    pub fn image_dim(&self) -> usize {
        self.synthesis.as_ref().map_or(self.dim(), |s| s.out_dim())
    }

    pub fn to_image(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.synthesis {
            Some(s) => s.forward(x),
            None => {
                check_len("coefficients", x.len(), self.dim())?;
                Ok(x.to_vec())
            }
        }
    }

    /// `Ax − b`
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.op.forward(x)?;
        r.iter_mut().zip(&self.b).for_each(|(ri, bi)| *ri -= bi);
        Ok(r)
    }

    /// `½‖Ax − b‖²`
    pub fn data_fidelity(&self, x: &[f64]) -> Result<f64> {
        let r = self.residual(x)?;
        Ok(0.5 * compensated_sum(r.iter().map(|v| v * v)))
    }

    /// `Aᵀ(Ax − b)`
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.op.adjoint(&self.residual(x)?)
    }

    /// The step constant: the fixed one if set, otherwise a safety-inflated
    /// power-iteration estimate of `λ_max(AᵀA)`.
    pub fn lipschitz(&self, config: &SolverConfig) -> Result<f64> {
        if let Some(l) = self.lipschitz {
            return Ok(l);
        }
        let bound = estimate_spectral_bound(
            self.op.as_ref(),
            config.power_tol,
            config.power_max_iters,
            config.seed,
        )?;
        Ok(bound.lipschitz(config.step_safety))
    }
}

pub fn initial_guess(problem: &Problem, init: Init) -> Result<Vec<f64>> {
    match init {
        Init::Zero => Ok(vec![0.0; problem.dim()]),
        Init::Adjoint => problem.op.adjoint(&problem.b),
    }
}

/// One majorize-minimize step: a gradient step of length `1/L` followed by
/// soft-thresholding at `β wᵢ / L`.
pub fn iwsta_step(
    x: &[f64],
    w: &WeightVector,
    problem: &Problem,
    lipschitz: f64,
    beta: f64,
) -> Result<Vec<f64>> {
    if !(lipschitz > 0.0) {
        return Err(Error::invalid(format!("L must be positive, got {lipschitz}")));
    }
    if !(beta >= 0.0) {
        return Err(Error::invalid(format!("beta must be nonnegative, got {beta}")));
    }
    check_len("weights", w.len(), x.len())?;
    let grad = problem.gradient(x)?;
    let inv_l = 1.0 / lipschitz;
    Ok(x.iter()
        .zip(&grad)
        .zip(w.as_slice())
        .map(|((xi, gi), wi)| soft_threshold_scalar(xi - inv_l * gi, beta * wi * inv_l))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    /// Objective value of the running strategy.
    pub cost: f64,
    pub fidelity: f64,
    pub mae: Option<f64>,
    /// Milliseconds since the solve started.
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    records: Vec<TraceRecord>,
}

impl IterationTrace {
    pub fn push(&mut self, record: TraceRecord) {
        debug_assert!(self.records.last().is_none_or(|r| r.iter < record.iter));
        self.records.push(record);
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn costs(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.cost)
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub x: Vec<f64>,
    pub trace: IterationTrace,
    pub lipschitz: f64,
    pub iterations: usize,
    pub stopped_early: bool,
}

fn mean_abs_error(a: &[f64], b: &[f64]) -> f64 {
    compensated_sum(a.iter().zip(b).map(|(x, y)| (x - y).abs())) / a.len() as f64
}

/// Runs the alternating weight / coefficient updates.
///
/// Iteration `k` records the cost of `x_k` under the weights computed from
/// `x_k`, so for the entropy-regularized strategy the recorded costs are
/// the objective values along the iterates. `truth`, if given, is compared
/// against the synthesized image of each iterate.
pub fn solve(
    problem: &Problem,
    config: &SolverConfig,
    x0: &[f64],
    truth: Option<&[f64]>,
) -> Result<SolveOutput> {
    config.validate()?;
    check_len("x0", x0.len(), problem.dim())?;
    if !all_finite(x0) {
        return Err(Error::invalid("x0 contains non-finite values"));
    }
    if let Some(t) = truth {
        check_len("truth", t.len(), problem.image_dim())?;
    }

    let lipschitz = problem.lipschitz(config)?;
    let start = Instant::now();
    let mut trace = IterationTrace::default();
    let mut x = x0.to_vec();
    let mut w = strategy_weights(&x, config)?;
    let mut iterations = 0;
    let mut stopped_early = false;

    for k in 1..=config.max_iters {
        let next = iwsta_step(&x, &w, problem, lipschitz, config.beta)?;
        if !all_finite(&next) {
            return Err(Error::Diverged {
                iteration: k,
                trace: Box::new(trace),
            });
        }
        let diff = norm2(&next.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>());
        let change = diff / norm2(&x).max(f64::EPSILON);
        w = strategy_weights(&next, config)?;
        x = next;
        iterations = k;
        stopped_early = config.rel_change_tol > 0.0 && change < config.rel_change_tol;

        if k % config.trace_stride == 0 || k == config.max_iters || stopped_early {
            let cost = evaluate_cost(&x, &w, problem, config.beta, config.gamma)?;
            if !cost.total.is_finite() {
                return Err(Error::Diverged {
                    iteration: k,
                    trace: Box::new(trace),
                });
            }
            let mae = match truth {
                Some(t) => Some(mean_abs_error(&problem.to_image(&x)?, t)),
                None => None,
            };
            trace.push(TraceRecord {
                iter: k,
                cost: cost.total,
                fidelity: cost.fidelity,
                mae,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
        if stopped_early {
            break;
        }
    }

    Ok(SolveOutput {
        x,
        trace,
        lipschitz,
        iterations,
        stopped_early,
    })
}
