use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight-update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Unit weights: plain iterative shrinkage-thresholding.
    Ista,
    /// Softmax weights on the simplex from the entropy-regularized cost.
    Eriwsta,
    /// `1 / (|x| + δ)`.
    Irl1,
    /// `1 / (|x| + δ)^(1 − p)`.
    Wlp,
    /// `1 / (1 + (|x| + δ)^(p + 1))`.
    Nw4,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Ista,
        Strategy::Eriwsta,
        Strategy::Irl1,
        Strategy::Wlp,
        Strategy::Nw4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Ista => "ista",
            Strategy::Eriwsta => "eriwsta",
            Strategy::Irl1 => "irl1",
            Strategy::Wlp => "wlp",
            Strategy::Nw4 => "nw4",
        }
    }

    pub fn uses_gamma(self) -> bool {
        self == Strategy::Eriwsta
    }

    pub fn uses_delta(self) -> bool {
        matches!(self, Strategy::Irl1 | Strategy::Wlp | Strategy::Nw4)
    }

    pub fn uses_p(self) -> bool {
        matches!(self, Strategy::Wlp | Strategy::Nw4)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown strategy '{s}'")))
    }
}

/// Starting point for the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    #[default]
    Zero,
    /// `Aᵀ b`.
    Adjoint,
}

impl FromStr for Init {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Init::Zero),
            "adjoint" => Ok(Init::Adjoint),
            other => Err(Error::invalid(format!("unknown init '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub strategy: Strategy,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub p: f64,
    pub max_iters: usize,
    /// Stop when `‖x⁺ − x‖ / ‖x‖` drops below this; 0 disables.
    pub rel_change_tol: f64,
    /// Multiplier applied to the spectral estimate to get `L`.
    pub step_safety: f64,
    /// Seeds the power-iteration start vector.
    pub seed: u64,
    /// Record every n-th iteration (the last one is always kept).
    pub trace_stride: usize,
    pub power_tol: f64,
    pub power_max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Eriwsta,
            beta: 1e-3,
            gamma: 1e-2,
            delta: 1e-3,
            p: 0.5,
            max_iters: 100,
            rel_change_tol: 0.0,
            step_safety: 1.01,
            seed: 0,
            trace_stride: 1,
            power_tol: 1e-9,
            power_max_iters: 1000,
        }
    }
}

impl SolverConfig {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("beta", self.beta)?;
        if self.strategy.uses_gamma() {
            positive("gamma", self.gamma)?;
        }
        if self.strategy.uses_delta() {
            positive("delta", self.delta)?;
        }
        if self.strategy.uses_p() && !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::invalid(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if !(self.rel_change_tol >= 0.0) {
            return Err(Error::invalid("rel_change_tol must be nonnegative"));
        }
        if !(self.step_safety >= 1.0 && self.step_safety.is_finite()) {
            return Err(Error::invalid(format!(
                "step_safety must be at least 1, got {}",
                self.step_safety
            )));
        }
        if self.trace_stride == 0 {
            return Err(Error::invalid("trace_stride must be at least 1"));
        }
        positive("power_tol", self.power_tol)?;
        Ok(())
    }
}
