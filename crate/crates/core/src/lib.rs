//! Sparse linear inverse problems solved by iterative weighted
//! shrinkage-thresholding.
//!
//! The crate is split into four layers:
//!
//! - [`operators`]: matrix-free linear operators (uniform blur, orthonormal
//!   2D Haar synthesis, composition) and a power-iteration spectral bound.
//! - [`solvers`]: soft-thresholding, per-coordinate weight strategies
//!   (entropy-regularized softmax weights plus the ISTA / IRL1 / WLP / NW4
//!   baselines), cost evaluation and the alternating update loop.
//! - [`simulation`]: Shepp-Logan phantom rendering and the blur + Gaussian
//!   noise degradation pipeline.
//! - [`harness`]: metrics, hyperparameter sweeps, profile extraction and the
//!   CSV / JSON report formats.

pub mod error;
pub mod harness;
pub mod operators;
pub mod signal;
pub mod simulation;
pub mod solvers;

pub use error::{Error, Result};
pub use signal::SignalVector;
