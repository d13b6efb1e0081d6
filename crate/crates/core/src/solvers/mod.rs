//! Iterative weighted shrinkage-thresholding.
//!
//! Every strategy alternates two updates on the current coefficients `x`:
//! per-coordinate penalty weights `w` are recomputed from `x`, then `x`
//! takes one proximal-gradient step on `½‖Ax − b‖² + β Σ wᵢ|xᵢ|`. The
//! entropy-regularized strategy constrains `w` to the probability simplex
//! and adds `βγ Σ wᵢ ln wᵢ` to the objective, which gives the closed-form
//! softmax update in [`entropy_weights`].

mod config;
mod cost;
mod iwsta;
mod prox;
mod weights;

pub use config::{Init, SolverConfig, Strategy};
pub use cost::{evaluate_cost, CostBreakdown};
pub use iwsta::{
    initial_guess, iwsta_step, solve, IterationTrace, Problem, SolveOutput, TraceRecord,
};
pub use prox::{soft_threshold, soft_threshold_scalar};
pub use weights::{baseline_weights, entropy_weights, strategy_weights, WeightVector};
