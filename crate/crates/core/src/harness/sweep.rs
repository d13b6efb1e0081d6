use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{mae, restore_image};
use crate::error::{Error, Result};
use crate::operators::{Identity, LinearOperator};
use crate::simulation::{DegradationSpec, ImageGrid};
use crate::solvers::{initial_guess, solve, Init, IterationTrace, Problem, SolverConfig, Strategy};

/// Axes of a hyperparameter sweep. Each strategy only expands the axes it
/// uses: ISTA sweeps `β`, ERIWSTA sweeps `β × γ`, the reweighting
/// baselines sweep `β × δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub strategies: Vec<Strategy>,
    pub beta_values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub delta_values: Vec<f64>,
    pub iters_per_cell: usize,
    pub p: f64,
    pub init: Init,
    pub seed: u64,
    pub step_safety: f64,
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
}

fn decades(lo: i32, hi: i32, step: usize) -> Vec<f64> {
    (lo..=hi).step_by(step).map(|e| 10f64.powi(e)).collect()
}

impl SweepGrid {
    /// 21 decades per axis, `10⁻¹⁰ … 10¹⁰`, 100 iterations per cell.
    pub fn full() -> Self {
        Self {
            strategies: Strategy::ALL.to_vec(),
            beta_values: decades(-10, 10, 1),
            gamma_values: decades(-10, 10, 1),
            delta_values: decades(-10, 10, 1),
            iters_per_cell: 100,
            p: 0.5,
            init: Init::Zero,
            seed: 0,
            step_safety: 1.01,
            workers: None,
        }
    }

    /// Seven decades per axis and 30 iterations per cell, sized for CI.
    pub fn desk() -> Self {
        Self {
            beta_values: decades(-4, 2, 1),
            gamma_values: decades(-5, 1, 1),
            delta_values: decades(-5, 1, 1),
            iters_per_cell: 30,
            ..Self::full()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.strategies.is_empty() {
            return Err(Error::invalid("sweep needs at least one strategy"));
        }
        for (name, axis) in [
            ("beta", &self.beta_values),
            ("gamma", &self.gamma_values),
            ("delta", &self.delta_values),
        ] {
            if axis.is_empty() {
                return Err(Error::invalid(format!("sweep axis '{name}' is empty")));
            }
            if let Some(v) = axis.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(Error::invalid(format!("sweep axis '{name}' has non-positive value {v}")));
            }
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::invalid(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("worker count must be at least 1"));
        }
        self.solver_config(&CellKey {
            strategy: Strategy::Ista,
            beta: self.beta_values[0],
            gamma: None,
            delta: None,
        })
        .validate()
    }

    /// All cells in deterministic order.
    pub fn cells(&self) -> Vec<CellKey> {
        let mut cells = Vec::new();
        for &strategy in &self.strategies {
            let gammas: Vec<Option<f64>> = if strategy.uses_gamma() {
                self.gamma_values.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            let deltas: Vec<Option<f64>> = if strategy.uses_delta() {
                self.delta_values.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for &beta in &self.beta_values {
                for &gamma in &gammas {
                    for &delta in &deltas {
                        cells.push(CellKey {
                            strategy,
                            beta,
                            gamma,
                            delta,
                        });
                    }
                }
            }
        }
        cells.sort_by(CellKey::cmp_key);
        cells
    }

    pub fn solver_config(&self, key: &CellKey) -> SolverConfig {
        let defaults = SolverConfig::default();
        SolverConfig {
            strategy: key.strategy,
            beta: key.beta,
            gamma: key.gamma.unwrap_or(defaults.gamma),
            delta: key.delta.unwrap_or(defaults.delta),
            p: self.p,
            max_iters: self.iters_per_cell,
            seed: self.seed,
            step_safety: self.step_safety,
            ..defaults
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub strategy: Strategy,
    pub beta: f64,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
}

impl CellKey {
    fn cmp_key(a: &Self, b: &Self) -> Ordering {
        let opt = |x: Option<f64>, y: Option<f64>| match (x, y) {
            (Some(x), Some(y)) => x.total_cmp(&y),
            (x, y) => x.is_some().cmp(&y.is_some()),
        };
        a.strategy
            .cmp(&b.strategy)
            .then(a.beta.total_cmp(&b.beta))
            .then(opt(a.gamma, b.gamma))
            .then(opt(a.delta, b.delta))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellResult {
    pub key: CellKey,
    /// NaN for diverged cells.
    pub final_mae: f64,
    pub diverged: bool,
    pub wall_ms: f64,
    pub trace: IterationTrace,
    /// Final coefficients; absent when the cell diverged.
    pub x_final: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentMetadata {
    pub image_height: usize,
    pub image_width: usize,
    pub degradation: Option<DegradationSpec>,
    pub grid: SweepGrid,
    pub lipschitz: f64,
    pub cell_count: usize,
    pub total_wall_ms: f64,
    pub tool_version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub cells: Vec<CellResult>,
    pub metadata: ExperimentMetadata,
}

impl ExperimentResult {
    /// Lowest-MAE converged cell for `strategy`; ties keep the earlier cell.
    pub fn best(&self, strategy: Strategy) -> Option<&CellResult> {
        self.cells
            .iter()
            .filter(|c| c.key.strategy == strategy && !c.diverged)
            .fold(None, |best: Option<&CellResult>, c| match best {
                Some(b) if b.final_mae <= c.final_mae => Some(b),
                _ => Some(c),
            })
    }
}

/// Runs every cell of `grid` from the same starting point.
///
/// The step constant is estimated once and shared by all cells. Cells run
/// in parallel but results come back in [`SweepGrid::cells`] order, so the
/// output does not depend on scheduling.
pub fn run_sweep(problem: &Problem, grid: &SweepGrid, truth: &ImageGrid) -> Result<ExperimentResult> {
    grid.validate()?;
    if problem.image_dim() != truth.len() {
        return Err(Error::invalid(format!(
            "problem produces {} pixels but truth has {}",
            problem.image_dim(),
            truth.len()
        )));
    }
    let started = Instant::now();
    let cells = grid.cells();
    let lipschitz = problem.lipschitz(&grid.solver_config(&cells[0]))?;
    let shared = problem.clone().with_lipschitz(lipschitz)?;
    let x0 = initial_guess(problem, grid.init)?;
    let identity = Identity::new(problem.dim());
    let synthesis: &dyn LinearOperator = problem.synthesis().map_or(&identity, |s| s.as_ref());

    let run_cell = |key: &CellKey| -> Result<CellResult> {
        let cell_start = Instant::now();
        let config = grid.solver_config(key);
        match solve(&shared, &config, &x0, Some(truth.pixels())) {
            Ok(out) => {
                let restored = restore_image(&out.x, synthesis, truth.height(), truth.width())?;
                Ok(CellResult {
                    key: *key,
                    final_mae: mae(&restored, truth)?,
                    diverged: false,
                    wall_ms: cell_start.elapsed().as_secs_f64() * 1e3,
                    trace: out.trace,
                    x_final: Some(out.x),
                })
            }
            Err(Error::Diverged { trace, .. }) => Ok(CellResult {
                key: *key,
                final_mae: f64::NAN,
                diverged: true,
                wall_ms: cell_start.elapsed().as_secs_f64() * 1e3,
                trace: *trace,
                x_final: None,
            }),
            Err(e) => Err(e),
        }
    };

    let results: Result<Vec<CellResult>> = match grid.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
            .install(|| cells.par_iter().map(run_cell).collect()),
        None => cells.par_iter().map(run_cell).collect(),
    };
    let cells = results?;

    Ok(ExperimentResult {
        metadata: ExperimentMetadata {
            image_height: truth.height(),
            image_width: truth.width(),
            degradation: None,
            grid: grid.clone(),
            lipschitz,
            cell_count: cells.len(),
            total_wall_ms: started.elapsed().as_secs_f64() * 1e3,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        },
        cells,
    })
}
